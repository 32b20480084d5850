#include "trisum/params.hpp"

#include <cmath>
#include <sstream>

namespace trisum {

namespace {
constexpr double kNormTol = 1e-12;  // slack for b + c - a = 1
}

ExponentTriple triple_from_ac(double a, double c) {
    return {a, 1.0 + a - c, c};
}

ValidationReport validate_triple(const ExponentTriple& t) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& why) {
        rep.grade = TripleGrade::invalid;
        rep.reasons.push_back(why);
    };

    if (!std::isfinite(t.a) || !std::isfinite(t.b) || !std::isfinite(t.c)) {
        fail("non-finite exponent");
        return rep;
    }
    if (!(t.a > 0.0)) fail("a must be positive");
    if (!(t.c > t.a)) fail("c must exceed a");
    if (!(t.b >= t.c)) fail("b must be at least c");
    if (std::fabs(t.b + t.c - t.a - 1.0) > kNormTol)
        fail("b + c - a must equal 1");
    if (!rep.reasons.empty()) return rep;

    rep.grade = TripleGrade::basic;
    if (!(t.c < t.b)) rep.reasons.push_back("theorem grade needs c < b");
    if (!(t.c < 2.0 * t.a)) rep.reasons.push_back("theorem grade needs c < 2a");
    if (rep.reasons.empty()) rep.grade = TripleGrade::theorem;
    return rep;
}

void require_grade(const ExponentTriple& t, TripleGrade min_grade) {
    ValidationReport rep = validate_triple(t);
    if (static_cast<int>(rep.grade) >= static_cast<int>(min_grade)) return;
    std::ostringstream msg;
    msg << "exponent triple (" << t.a << ", " << t.b << ", " << t.c << ") rejected:";
    for (const auto& r : rep.reasons) msg << ' ' << r << ';';
    throw parameter_error(msg.str());
}

AdmissibleTuple tuple_from_triple(const ExponentTriple& t) {
    require_grade(t, TripleGrade::basic);
    return {{t.a, -t.b, -t.c}};
}

static int tuple_xi(const std::vector<double>& a) {
    int xi = 0;
    for (double v : a) xi += (v > 0.0) ? 1 : -1;
    return xi;
}

DerivedConstants derive_constants(const ExponentTriple& t) {
    require_grade(t, TripleGrade::basic);
    DerivedConstants d;
    const double denom = t.b + t.c - t.a;  // = 1 up to kNormTol, kept symbolic
    d.xi = tuple_xi({t.a, -t.b, -t.c});
    d.i_a = 1.0 / t.a - 1.0 / t.b - 1.0 / t.c;
    d.q_a = t.a * t.b * t.c;  // (a)(-b)(-c)
    d.eta = 2.0 * std::pow(std::pow(t.a, t.a) / (std::pow(t.b, t.b) * std::pow(t.c, t.c)),
                           1.0 / denom);
    d.kappa = d.eta / kTwoPi;
    d.lambda = std::sqrt(kTwoPi / denom);
    d.alpha = 1.0 / (8.0 + d.i_a * d.i_a);
    d.c_alpha = 7.0 * d.alpha / 8.0;
    return d;
}

AdmissibilityReport check_admissibility(const AdmissibleTuple& tuple) {
    const auto& a = tuple.entries;
    if (a.size() < 2) throw parameter_error("admissibility needs at least two entries");
    for (double v : a)
        if (v == 0.0 || !std::isfinite(v))
            throw parameter_error("tuple entries must be finite and nonzero");

    AdmissibilityReport rep;
    rep.xi = tuple_xi(a);
    double abs_sum = 0.0;
    for (double v : a) abs_sum += std::fabs(v);

    rep.admissible = true;
    for (double aj : a) {
        double diff_sum = 0.0;
        for (double al : a) diff_sum += std::fabs(al - aj);
        AdmissibilityEntry e;
        e.lhs = aj * aj;
        e.rhs = (kPi / 4.0) * (-rep.xi * aj + abs_sum - diff_sum);
        e.margin = e.lhs - e.rhs;
        if (!(e.lhs > e.rhs)) rep.admissible = false;
        rep.entries.push_back(e);
    }
    return rep;
}

ExponentTable exponent_table(const ExponentTriple& t) {
    require_grade(t, TripleGrade::theorem);
    ExponentTable tab;
    const double slope = (2.0 * t.a - t.c) / (2.0 * (t.b - t.c));
    tab.theorem_e1 = 1.25 - t.c / (4.0 * t.a);
    tab.theorem_e2 = 0.25 + slope;
    tab.vdc_e = 0.75 + slope;
    tab.ep_e = 19.0 / 21.0 + 0.5 * slope;
    tab.in_range13 = (42.0 * t.a + 34.0 * t.c) / 55.0 < t.b && t.b < 2.0 * t.a + t.c;

    const double theorem_e = std::fmax(tab.theorem_e1, tab.theorem_e2);
    tab.winner = "theorem";
    double best = theorem_e;
    if (tab.vdc_e < best) { best = tab.vdc_e; tab.winner = "vdc"; }
    if (tab.ep_e < best) { best = tab.ep_e; tab.winner = "ep"; }
    return tab;
}

}  // namespace trisum
