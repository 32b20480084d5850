#include "trisum/zeta.hpp"

#include <cmath>
#include <complex>
#include <vector>

namespace trisum {

namespace {

using lcplx = std::complex<long double>;

// B_{2k} / (2k)! for 2k = 2, 4, ..., 28
const long double kBernOverFact[] = {
    (1.0L / 6.0L) / 2.0L,
    (-1.0L / 30.0L) / 24.0L,
    (1.0L / 42.0L) / 720.0L,
    (-1.0L / 30.0L) / 40320.0L,
    (5.0L / 66.0L) / 3628800.0L,
    (-691.0L / 2730.0L) / 479001600.0L,
    (7.0L / 6.0L) / 87178291200.0L,
    (-3617.0L / 510.0L) / 20922789888000.0L,
    (43867.0L / 798.0L) / 6402373705728000.0L,
    (-174611.0L / 330.0L) / 2432902008176640000.0L,
    (854513.0L / 138.0L) / 1124000727777607680000.0L,
    (-236364091.0L / 2730.0L) / 620448401733239439360000.0L,
    (8553103.0L / 6.0L) / 403291461126605635584000000.0L,
    (-23749461029.0L / 870.0L) / 304888344611713860501504000000.0L,
};
constexpr int kBernTerms = 12;  // corrections used; one more drives the bound

// log n and n^{-1/2} tables for the direct sum; grown on demand.
thread_local std::vector<long double> g_logs{0.0L, 0.0L};
thread_local std::vector<long double> g_rsqrt{0.0L, 1.0L};

void grow_tables(std::uint64_t n) {
    while (g_logs.size() <= n) {
        const long double v = (long double)g_logs.size();
        g_logs.push_back(logl(v));
        g_rsqrt.push_back(1.0L / sqrtl(v));
    }
}

// remainder bound after kBernTerms corrections with N direct terms
long double em_remainder_bound(long double t, std::uint64_t n) {
    const lcplx s{0.5L, t};
    long double log_prod = 0.0L;
    for (int j = 0; j <= 2 * kBernTerms; ++j)
        log_prod += 0.5L * logl((0.5L + j) * (0.5L + j) + t * t);
    const long double log_bf = logl(fabsl(kBernOverFact[kBernTerms]));
    const long double sigma = 0.5L;
    const long double log_npow = -(sigma + 2 * kBernTerms + 1) * logl((long double)n);
    const long double ratio = std::abs(s + (long double)(2 * kBernTerms + 1)) /
                              (sigma + 2 * kBernTerms + 1);
    return expl(log_bf + log_prod + log_npow) * ratio;
}

lcplx em_zeta(long double t, std::uint64_t n) {
    grow_tables(n);
    // direct sum, accumulated from the large-n end where terms are smallest
    long double re = 0.0L, im = 0.0L;
    for (std::uint64_t k = n; k >= 1; --k) {
        const long double ph = t * g_logs[k];
        re += g_rsqrt[k] * cosl(ph);
        im -= g_rsqrt[k] * sinl(ph);
    }
    lcplx sum{re, im};

    const lcplx s{0.5L, t};
    const long double ln_n = g_logs[n];
    const lcplx n_pow_ms = std::exp(-s * ln_n);          // N^{-s}
    sum += (long double)n * n_pow_ms / (s - 1.0L);       // N^{1-s}/(s-1)
    sum -= 0.5L * n_pow_ms;

    lcplx prod = s;                                      // prod_{j=0}^{2k-2} (s+j)
    lcplx npow = n_pow_ms / (long double)n;              // N^{-s-2k+1}
    const long double inv_n2 = 1.0L / ((long double)n * (long double)n);
    for (int k = 1; k <= kBernTerms; ++k) {
        sum += kBernOverFact[k - 1] * prod * npow;
        prod *= (s + (long double)(2 * k - 1)) * (s + (long double)(2 * k));
        npow *= inv_n2;
    }
    return sum;
}

}  // namespace

ZetaResult zeta_critical(double t, double tol) {
    if (!std::isfinite(t) || std::fabs(t) > 1e6)
        throw parameter_error("zeta_critical: |t| must be finite and <= 1e6");
    if (!(tol >= 1e-15))
        throw parameter_error("zeta_critical: tol below supported range");

    const long double at = fabsl((long double)t);
    std::uint64_t n = std::max<std::uint64_t>(10, (std::uint64_t)ceill(at / 2.0L));
    long double bound = em_remainder_bound(at, n);
    while (bound > 0.5L * (long double)tol) {
        if (n > 100'000'000ULL)
            throw accuracy_error("zeta_critical: tolerance unreachable", (double)bound);
        n *= 2;
        bound = em_remainder_bound(at, n);
    }

    lcplx v = em_zeta(at, n);
    if (t < 0) v = std::conj(v);

    ZetaResult r;
    r.value = cplx((double)v.real(), (double)v.imag());
    // truncation bound plus a generous rounding floor for the direct sum
    r.err_bound = (double)bound + 4e-18 * std::sqrt((double)n) * (1.0 + std::fabs(t));
    r.terms = n;
    return r;
}

cplx product_integrand(const ExponentTriple& t, double tt, double tol) {
    require_grade(t, TripleGrade::basic);
    const double arg[3] = {t.a * tt, -t.b * tt, -t.c * tt};
    cplx z[3];
    const double first = tol / 3.0;
    for (int i = 0; i < 3; ++i) z[i] = zeta_critical(arg[i], std::max(first, 1e-15)).value;
    // one rebalance against the measured partner magnitudes
    for (int i = 0; i < 3; ++i) {
        const double others = std::abs(z[(i + 1) % 3]) * std::abs(z[(i + 2) % 3]);
        const double alloc = tol / (3.0 * std::max(1.0, others));
        if (alloc < first) z[i] = zeta_critical(arg[i], std::max(alloc, 1e-15)).value;
    }
    return z[0] * z[1] * z[2];
}

namespace {

struct SimpsonCtx {
    const ExponentTriple* triple;
    double eval_tol;
    int max_depth;
    std::uint64_t evals = 0;
    double err_acc = 0.0;

    cplx f(double x) {
        ++evals;
        return product_integrand(*triple, x, eval_tol);
    }
};

cplx adaptive_simpson(SimpsonCtx& ctx, double a, double b, cplx fa, cplx fm, cplx fb,
                      cplx whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const cplx flm = ctx.f(0.5 * (a + m));
    const cplx frm = ctx.f(0.5 * (m + b));
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const cplx both = left + right;
    const double dev = std::abs(both - whole);
    if (dev <= 15.0 * tol || depth >= ctx.max_depth) {
        ctx.err_acc += dev / 15.0;
        return both + (both - whole) / 15.0;
    }
    return adaptive_simpson(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adaptive_simpson(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

// 16-point Gauss-Legendre on [-1, 1]
const double kGlx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                        0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                        0.9445750230732326, 0.9894009349916499};
const double kGlw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                        0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                        0.0622535239386479, 0.0271524594117541};
// embedded 8-point rule for the error estimate
const double kGl8x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                         0.9602898564975363};
const double kGl8w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                         0.1012285362903763};

}  // namespace

IntegralResult moment_integral(const ExponentTriple& t, double T,
                               const QuadratureSpec& quad) {
    require_grade(t, TripleGrade::basic);
    if (!(T >= 0.0) || T > 5000.0)
        throw parameter_error("moment_integral: T must lie in [0, 5000]");
    IntegralResult out;
    if (T == 0.0) return out;

    const double freq = t.a + t.b + t.c;
    const double cap = kTwoPi / (5.0 * freq * std::max(1.0, std::log(T)));
    const std::uint64_t panels = (std::uint64_t)std::ceil(T / cap);

    SimpsonCtx ctx;
    ctx.triple = &t;
    ctx.eval_tol = std::max(1e-14, quad.abs_tol / (50.0 * std::max(1.0, T)));
    ctx.max_depth = quad.max_subdivisions;

    cplx acc = 0.0;
    if (quad.rule == QuadratureRule::adaptive_simpson) {
        double x0 = 0.0;
        cplx f0 = ctx.f(x0);
        for (std::uint64_t p = 0; p < panels; ++p) {
            const double x1 = T * (double)(p + 1) / (double)panels;
            const double tol_p = quad.abs_tol * (x1 - x0) / T;
            const cplx f1 = ctx.f(x1);
            const cplx fm = ctx.f(0.5 * (x0 + x1));
            const cplx whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            acc += adaptive_simpson(ctx, x0, x1, f0, fm, f1, whole, tol_p, 0);
            x0 = x1;
            f0 = f1;
        }
    } else {
        for (std::uint64_t p = 0; p < panels; ++p) {
            const double x0 = T * (double)p / (double)panels;
            const double x1 = T * (double)(p + 1) / (double)panels;
            const double mid = 0.5 * (x0 + x1), half = 0.5 * (x1 - x0);
            cplx g16 = 0.0, g8 = 0.0;
            for (int i = 0; i < 8; ++i) {
                const cplx lo = ctx.f(mid - half * kGlx[i]);
                const cplx hi = ctx.f(mid + half * kGlx[i]);
                g16 += kGlw[i] * (lo + hi);
            }
            for (int i = 0; i < 4; ++i) {
                const cplx lo = ctx.f(mid - half * kGl8x[i]);
                const cplx hi = ctx.f(mid + half * kGl8x[i]);
                g8 += kGl8w[i] * (lo + hi);
            }
            acc += half * g16;
            ctx.err_acc += std::abs(half * (g16 - g8));
        }
    }

    out.value = acc;
    out.est_error = ctx.err_acc + T * ctx.eval_tol;
    out.evals = ctx.evals;
    if (out.est_error > std::max(quad.abs_tol * 4.0, 1e-12))
        throw accuracy_error("moment_integral: tolerance unreachable within subdivision budget",
                             out.est_error);
    return out;
}

}  // namespace trisum
