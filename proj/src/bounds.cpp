#include "trisum/bounds.hpp"

#include <cmath>

namespace trisum {

DyadicBox make_box(const ExponentTriple& t, double n1, double n2, double n3) {
    require_grade(t, TripleGrade::theorem);
    if (!(n1 >= 1.0) || !(n2 >= 1.0) || !(n3 >= 1.0))
        throw parameter_error("box scales must be at least 1");
    DyadicBox box{n1, n2, n3, 0.0};
    box.x = std::pow(n2, t.b) * std::pow(n3, t.c) * std::pow(n1, -t.a);
    return box;
}

double rs_bound(const DyadicBox& box, double eps) {
    if (!(eps >= 0.0)) throw parameter_error("eps must be non-negative");
    if (!(box.x > 0.0)) throw parameter_error("box must carry a positive X");
    const double p = box.n1 * box.n2 * box.n3;
    const double lead = std::pow(p, 1.0 + eps);
    return lead * (std::pow(box.x / (box.n1 * box.n2 * box.n3 * box.n3), 0.25) +
                   std::pow(box.n1 * box.n2, -0.25) +
                   std::pow(box.n3, -0.5) +
                   std::pow(box.x, -0.5));
}

std::vector<GridRow> winner_grid(unsigned grid_n) {
    if (grid_n < 2) throw parameter_error("grid needs at least 2 points per axis");
    std::vector<GridRow> rows;
    rows.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    for (unsigned i = 0; i < grid_n; ++i) {
        const double a = static_cast<double>(i + 1) / (grid_n + 1);
        const double c_hi = std::min(2.0 * a, 0.5 * (1.0 + a));
        if (!(c_hi > a)) continue;
        for (unsigned j = 0; j < grid_n; ++j) {
            const double c = a + (c_hi - a) * (j + 1) / (grid_n + 1);
            const ExponentTriple t = triple_from_ac(a, c);
            if (validate_triple(t).grade != TripleGrade::theorem) continue;
            rows.push_back({a, c, t.b, exponent_table(t)});
        }
    }
    return rows;
}

void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows) {
    os << "a,c,b,theorem_e1,theorem_e2,vdc_e,ep_e,winner,in_range13\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d\n", r.a,
                      r.c, r.b, r.table.theorem_e1, r.table.theorem_e2,
                      r.table.vdc_e, r.table.ep_e, r.table.winner.c_str(),
                      r.table.in_range13 ? 1 : 0);
        os << buf;
    }
}

std::vector<InequalityCheck> appendix_inequalities(const ExponentTriple& t) {
    require_grade(t, TripleGrade::theorem);
    std::vector<InequalityCheck> checks;

    // the saddle bound beats the van der Corput route exactly when b < 2a + c
    InequalityCheck gap;
    gap.name = "theorem_vs_vdc";
    gap.lhs = 1.25 - t.c / (4.0 * t.a);
    gap.rhs = 0.75 + (2.0 * t.a - t.c) / (2.0 * (t.b - t.c));
    gap.holds = gap.lhs < gap.rhs;
    gap.applicable = t.b < 2.0 * t.a + t.c;
    checks.push_back(gap);

    InequalityCheck range;
    range.name = "range_lower";
    range.lhs = 42.0 * t.a + 34.0 * t.c;
    range.rhs = 55.0 * t.b;
    range.holds = range.lhs < range.rhs;
    checks.push_back(range);

    InequalityCheck quad;
    quad.name = "c2_2a2_lt_3ac";
    quad.lhs = t.c * t.c + 2.0 * t.a * t.a;
    quad.rhs = 3.0 * t.a * t.c;
    quad.holds = quad.lhs < quad.rhs;
    checks.push_back(quad);

    return checks;
}

QuadraticScan scan_quadratic(unsigned samples) {
    if (samples < 2) throw parameter_error("need at least 2 sample points");
    const auto f = [](double x) { return 1092.0 * x * x + 336.0 * x - 441.0; };
    QuadraticScan scan;
    scan.at_half = f(0.5);
    scan.min_interior = f(1.0);
    for (unsigned i = 1; i <= samples; ++i) {
        const double x = 0.5 + 0.5 * i / (samples + 1.0);
        scan.min_interior = std::min(scan.min_interior, f(x));
    }
    scan.positive_interior = scan.min_interior > 0.0;
    return scan;
}

}  // namespace trisum
