#include "trisum/phase.hpp"

#include <cmath>

namespace trisum {

namespace {

// G and its first two derivatives in 80-bit, shared by the public entry
// points.  With the normalization b + c - a = 1 the derivative collapses to
// G'(t) = log(t / c_n), but everything below keeps the general form so the
// identities stay checkable.
struct RawPhase {
    long double g, g1, g2;
};

RawPhase raw_phase(const PhaseContext& ctx, long double t) {
    const long double a = ctx.triple.a, b = ctx.triple.b, c = ctx.triple.c;
    const long double lx = ctx.log_x;
    const long double lt2 = logl(t / 2.0L);

    const long double g_aux = a * t * (logl(a * t / 2.0L) - 1.0L) -
                              b * t * (logl(b * t / 2.0L) - 1.0L) -
                              c * t * (logl(c * t / 2.0L) - 1.0L);
    RawPhase r;
    r.g = -t * lx - g_aux;
    r.g1 = -lx + (b + c - a) * lt2 + (b * logl(b) + c * logl(c) - a * logl(a));
    r.g2 = (b + c - a) / t;
    return r;
}

cplx unit_phase(long double theta) {
    const long double th = fmodl(theta, 2.0L * 3.14159265358979323846264338328L);
    return {static_cast<double>(cosl(th)), static_cast<double>(sinl(th))};
}

struct PanelSum {
    cplx value;
    double err = 0.0;
    std::uint64_t evals = 0;
};

// adaptive Simpson on e^{iG} over [lo, hi]
void refine(const PhaseContext& ctx, double lo, double hi, cplx flo, cplx fmid,
            cplx fhi, cplx whole, double tol, int depth, PanelSum& out) {
    const double m = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
    const cplx flm = unit_phase(raw_phase(ctx, lm).g);
    const cplx frm = unit_phase(raw_phase(ctx, rm).g);
    out.evals += 2;
    const cplx left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const cplx right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double dev = std::abs(left + right - whole);
    if (dev <= 15.0 * tol || depth <= 0) {
        out.value += left + right + (left + right - whole) / 15.0;
        out.err += dev / 15.0;
        return;
    }
    refine(ctx, lo, m, flo, flm, fmid, left, 0.5 * tol, depth - 1, out);
    refine(ctx, m, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1, out);
}

}  // namespace

PhaseContext make_phase_context(const ExponentTriple& t, const Tuple3& n) {
    require_grade(t, TripleGrade::theorem);
    PhaseContext ctx;
    ctx.triple = t;
    ctx.n = n;
    ctx.consts = derive_constants(t);
    ctx.geom = tuple_geometry(t, n);
    ctx.log_x = static_cast<double>(t.b * logl(static_cast<long double>(n.n2)) +
                                    t.c * logl(static_cast<long double>(n.n3)) -
                                    t.a * logl(static_cast<long double>(n.n1)));
    return ctx;
}

PhaseValues phase_eval(const PhaseContext& ctx, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw parameter_error("phase argument must be positive and finite");
    const RawPhase r = raw_phase(ctx, t);
    return {static_cast<double>(r.g), static_cast<double>(r.g1),
            static_cast<double>(r.g2)};
}

OscIntegral oscillatory_integral(const PhaseContext& ctx, double t0, double t1,
                                 double abs_tol, int max_subdivisions) {
    if (!(t0 > 0.0) || !(t1 > t0) || !std::isfinite(t1))
        throw parameter_error("integration bounds must satisfy 0 < t0 < t1");
    if (!(abs_tol > 0.0)) throw parameter_error("abs_tol must be positive");

    // |G'| is monotone on each side of the saddle, so its maximum over any
    // subinterval sits at an endpoint; walk left to right keeping panels
    // under a fifth of an oscillation.
    const double total = t1 - t0;
    PanelSum acc;
    double u = t0;
    while (u < t1) {
        double h = t1 - u;
        for (int pass = 0; pass < 3; ++pass) {
            const double v = std::min(t1, u + h);
            const double m = std::max(std::fabs(raw_phase(ctx, u).g1),
                                      std::fabs(raw_phase(ctx, v).g1));
            const double cap_w = kTwoPi / (5.0 * std::max(m, 1e-9));
            if (h <= cap_w) break;
            h = cap_w;
        }
        h = std::max(h, total * 0x1p-40);  // keep panel count bounded
        const double v = std::min(t1, u + h);

        const double mid = 0.5 * (u + v);
        const cplx fu = unit_phase(raw_phase(ctx, u).g);
        const cplx fm = unit_phase(raw_phase(ctx, mid).g);
        const cplx fv = unit_phase(raw_phase(ctx, v).g);
        acc.evals += 3;
        const cplx whole = (v - u) / 6.0 * (fu + 4.0 * fm + fv);
        refine(ctx, u, v, fu, fm, fv, whole, abs_tol * (v - u) / total,
               max_subdivisions, acc);
        u = v;
    }
    if (acc.err > std::max(4.0 * abs_tol, 1e-12))
        throw accuracy_error("oscillatory integral did not converge", acc.err);
    return {acc.value, acc.err, acc.evals};
}

SpTerm sp_main_term(const PhaseContext& ctx) {
    const double cn = ctx.geom.c;
    const double denom = ctx.triple.b + ctx.triple.c - ctx.triple.a;
    const double g_at_c = -denom * cn;
    const double p = static_cast<double>(ctx.n.n1) * static_cast<double>(ctx.n.n2) *
                     static_cast<double>(ctx.n.n3);
    const cplx rot = unit_phase(g_at_c);
    return {std::sqrt(cn / p) * rot, ctx.consts.lambda * std::sqrt(cn) * rot,
            g_at_c};
}

SpComparison sp_compare(const PhaseContext& ctx, double f, double abs_tol) {
    if (!(f > 1.0)) throw parameter_error("window factor must exceed 1");
    const double cn = ctx.geom.c;
    const OscIntegral q = oscillatory_integral(ctx, cn / f, cn * f, abs_tol);
    static const cplx rot45{std::sqrt(0.5), -std::sqrt(0.5)};  // e^{-i pi/4}
    SpComparison cmp;
    cmp.quadrature = rot45 * q.value;
    cmp.prediction = sp_main_term(ctx).main;
    cmp.abs_err = std::abs(cmp.quadrature - cmp.prediction);
    cmp.rel_err = cmp.abs_err / std::abs(cmp.prediction);
    return cmp;
}

}  // namespace trisum
