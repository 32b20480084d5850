#include "trisum/moment.hpp"

#include <cmath>
#include <optional>

#include "trisum/lattice.hpp"

namespace trisum {

namespace {

constexpr std::uint64_t kDiagonalPmaxCap = 1'000'000'000'000ull;  // 1e12
constexpr std::uint64_t kSigmaDefaultPmax = 100'000'000ull;

// smallest-prime-factor sieve; factorizations stay exact however the
// floating pre-filters round
std::vector<std::uint32_t> spf_sieve(std::uint32_t n) {
    std::vector<std::uint32_t> spf(n + 1, 0);
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (spf[i] == 0)
            for (std::uint64_t j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

struct Factor {
    std::uint32_t p;
    std::uint32_t e;
};

void factorize(std::uint32_t u, const std::vector<std::uint32_t>& spf,
               std::vector<Factor>& out) {
    out.clear();
    while (u > 1) {
        const std::uint32_t p = spf[u];
        std::uint32_t e = 0;
        while (u % p == 0) { u /= p; ++e; }
        out.push_back({p, e});
    }
}

// The integer n1 with n1^pa = n2^pb n3^pc, when one exists and stays at or
// below n1_cap; prime-exponent arithmetic throughout.
std::optional<std::uint64_t> integral_root(std::uint32_t n2, std::uint32_t n3,
                                           const RationalTriple& rt,
                                           const std::vector<std::uint32_t>& spf,
                                           std::uint64_t n1_cap,
                                           std::vector<Factor>& f2,
                                           std::vector<Factor>& f3) {
    factorize(n2, spf, f2);
    factorize(n3, spf, f3);
    std::uint64_t n1 = 1;
    auto fold = [&](std::uint32_t p, std::int64_t e) -> bool {
        if (e % rt.pa != 0) return false;
        for (std::int64_t k = e / rt.pa; k > 0; --k) {
            if (n1 > n1_cap / p) { n1 = 0; return false; }
            n1 *= p;
        }
        return true;
    };
    std::size_t i = 0, j = 0;
    while (i < f2.size() || j < f3.size()) {
        std::uint32_t p;
        std::int64_t e = 0;
        if (i < f2.size() && (j >= f3.size() || f2[i].p <= f3[j].p)) {
            p = f2[i].p;
            e = static_cast<std::int64_t>(rt.pb) * f2[i].e;
            if (j < f3.size() && f3[j].p == p)
                e += static_cast<std::int64_t>(rt.pc) * f3[j++].e;
            ++i;
        } else {
            p = f3[j].p;
            e = static_cast<std::int64_t>(rt.pc) * f3[j++].e;
        }
        if (!fold(p, e)) return std::nullopt;
    }
    return n1;
}

void validate_rational(const RationalTriple& rt) {
    if (rt.q < 1 || rt.q > 64 || rt.pa < 1 || rt.pb < 1 || rt.pc < 1)
        throw parameter_error("rational triple must have positive parts, q <= 64");
    const auto rep = validate_triple(rt.to_triple());
    if (rep.grade == TripleGrade::invalid)
        throw parameter_error("rational triple does not reduce to a valid triple");
}

// Upper bound on sigma through its Euler product: per prime, the local
// factor is F(p^{-1/2}) with F(x) = sum over the exponent monoid
// {pa v1 = pb v2 + pc v3} of x^{v1+v2+v3}.  Truncations are rounded up.
double sigma_upper_euler(const RationalTriple& rt) {
    constexpr int kMaxWeight = 260;
    constexpr std::uint32_t kPrimeCutoff = 1'000'000;

    std::vector<std::uint64_t> cnt(kMaxWeight + 1, 0);
    int w0 = kMaxWeight + 1;
    for (int v2 = 0; v2 <= kMaxWeight; ++v2) {
        for (int v3 = 0; v3 + v2 <= kMaxWeight; ++v3) {
            if (v2 == 0 && v3 == 0) continue;
            const std::int64_t e = rt.pb * v2 + rt.pc * v3;
            if (e % rt.pa != 0) continue;
            const std::int64_t w = e / rt.pa + v2 + v3;
            if (w <= kMaxWeight) {
                ++cnt[w];
                w0 = std::min<int>(w0, static_cast<int>(w));
            }
        }
    }
    if (w0 > kMaxWeight) return 1.0;  // no nontrivial solutions at any prime

    // odd-only sieve would be overkill; plain flags up to the cutoff
    std::vector<bool> composite(kPrimeCutoff + 1, false);
    long double log_sigma = 0.0L;
    for (std::uint32_t p = 2; p <= kPrimeCutoff; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t m = static_cast<std::uint64_t>(p) * p;
             m <= kPrimeCutoff; m += p)
            composite[m] = true;
        const long double x = 1.0L / sqrtl(static_cast<long double>(p));
        long double f = 0.0L, xw = powl(x, w0);
        for (int w = w0; w <= kMaxWeight; ++w, xw *= x)
            if (cnt[w]) f += cnt[w] * xw;
        // crude cover for weights beyond the table: at most (w+1)^2 monoid
        // elements of weight w
        const long double wt = powl(x, kMaxWeight + 1);
        f += wt * (kMaxWeight + 3) * (kMaxWeight + 3) / powl(1.0L - x, 3);
        if (f < 1e-19L) {
            // every remaining prime up to the cutoff contributes less than
            // this f; cover them all in one rounded-up stroke
            log_sigma += 1e-12L;
            break;
        }
        log_sigma += logl(1.0L + f);
    }
    // primes above the cutoff: F - 1 <= C n^{-w0/2} summed over all n > P0
    long double coef = 0.0L;
    {
        const long double x0 = 1.0L / sqrtl(static_cast<long double>(kPrimeCutoff));
        long double scale = 1.0L;
        for (int w = w0; w <= kMaxWeight; ++w, scale *= x0)
            if (cnt[w]) coef += cnt[w] * scale;
    }
    const long double half_w0 = 0.5L * w0;
    // w0 >= 3 for any valid triple (weights 1 and 2 would force a = b or a = c)
    const long double tail =
        coef * powl(static_cast<long double>(kPrimeCutoff), 1.0L - half_w0) /
        (half_w0 - 1.0L);
    log_sigma += tail;
    return static_cast<double>(expl(log_sigma));
}

}  // namespace

ExponentTriple RationalTriple::to_triple() const {
    const double q = static_cast<double>(this->q);
    return {pa / q, pb / q, pc / q};
}

RationalTriple rationalize_triple(const ExponentTriple& t) {
    for (std::int64_t q = 1; q <= 64; ++q) {
        const auto near = [&](double x, std::int64_t& num) {
            num = std::llround(x * static_cast<double>(q));
            return num >= 1 && std::fabs(x - static_cast<double>(num) / q) <= 1e-9;
        };
        RationalTriple rt;
        rt.q = q;
        if (near(t.a, rt.pa) && near(t.b, rt.pb) && near(t.c, rt.pc)) return rt;
    }
    throw parameter_error("exponents are not rational with denominator <= 64");
}

std::vector<DiagonalSolution> diagonal_solutions(const RationalTriple& rt,
                                                 std::uint64_t p_max) {
    validate_rational(rt);
    if (p_max < 1) throw parameter_error("p_max must be at least 1");
    if (p_max > kDiagonalPmaxCap)
        throw resource_error("diagonal search cap exceeded", kDiagonalPmaxCap);

    // P for the pair (n2, n3) is n2^{(pa+pb)/pa} n3^{(pa+pc)/pa} exactly
    const long double lp = logl(static_cast<long double>(p_max));
    const long double e2 = static_cast<long double>(rt.pa + rt.pb) / rt.pa;
    const long double e3 = static_cast<long double>(rt.pa + rt.pc) / rt.pa;
    const std::uint32_t n2_max =
        static_cast<std::uint32_t>(expl(lp / e2) * (1.0L + 1e-9L)) + 1;
    const std::uint32_t n3_max =
        static_cast<std::uint32_t>(expl(lp / e3) * (1.0L + 1e-9L)) + 1;
    const auto spf = spf_sieve(std::max(n2_max, n3_max) + 1);

    std::vector<DiagonalSolution> out;
    std::vector<Factor> f2, f3;
    for (std::uint32_t n2 = 1; n2 <= n2_max; ++n2) {
        const long double base = e2 * logl(static_cast<long double>(n2));
        if (base > lp * (1.0L + 1e-12L) + 1e-9L) break;
        for (std::uint32_t n3 = 1; n3 <= n3_max; ++n3) {
            if (base + e3 * logl(static_cast<long double>(n3)) >
                lp * (1.0L + 1e-12L) + 1e-9L)
                break;
            const std::uint64_t pair = static_cast<std::uint64_t>(n2) * n3;
            const auto n1 = integral_root(n2, n3, rt, spf, p_max / pair, f2, f3);
            if (!n1) continue;
            if (*n1 * pair <= p_max) out.push_back({*n1, n2, n3});
        }
    }
    return out;
}

SigmaSeries sigma_series(const RationalTriple& rt, std::uint64_t p_max) {
    validate_rational(rt);
    const ExponentTriple t = rt.to_triple();
    if (!(t.a < std::min(t.b, t.c)))
        throw parameter_error("sigma series needs a < min(b, c)");

    SigmaSeries s;
    long double acc = 0.0L;
    const auto sols = diagonal_solutions(rt, p_max);
    for (const auto& d : sols) {
        const long double p = static_cast<long double>(d.n1) * d.n2 * d.n3;
        acc += 1.0L / sqrtl(p);
    }
    s.value = static_cast<double>(acc);
    s.solution_count = sols.size();
    s.tail_bound = std::max(0.0, sigma_upper_euler(rt) - s.value);
    return s;
}

double diag_partial(const RationalTriple& rt, double T) {
    validate_rational(rt);
    if (!std::isfinite(T)) throw parameter_error("T must be finite");
    const ExponentTriple t = rt.to_triple();
    const long double abc = static_cast<long double>(t.a) * t.b * t.c;
    const long double q13 = powl(abc, -1.0L / 3.0L);
    // tau <= T caps P at (abc)^{1/2} (T / 2 pi)^{3/2}
    const long double pm = powl(static_cast<long double>(T) / kTwoPi, 1.5L) *
                           sqrtl(abc) * (1.0L + 1e-9L);
    if (!(pm >= 1.0L)) return 0.0;
    const std::uint64_t p_max = static_cast<std::uint64_t>(
        std::min(pm, static_cast<long double>(kDiagonalPmaxCap)));

    long double acc = 0.0L;
    for (const auto& d : diagonal_solutions(rt, p_max)) {
        const long double p = static_cast<long double>(d.n1) * d.n2 * d.n3;
        const long double tau = kTwoPi * powl(p, 2.0L / 3.0L) * q13;
        if (tau <= T) acc += (T - tau) / sqrtl(p);
    }
    return static_cast<double>(acc);
}

M1Result m1_sum(const ExponentTriple& t, double T) {
    require_grade(t, TripleGrade::theorem);
    if (!(T >= 0.0) || !std::isfinite(T))
        throw parameter_error("T must be finite and non-negative");

    std::optional<RationalTriple> rt;
    try {
        rt = rationalize_triple(t);
    } catch (const parameter_error&) {
    }

    M1Result res;
    res.star_exact = rt.has_value();
    const long double K = static_cast<long double>(t.a) * T / kTwoPi;
    if (K < 1.0L) return res;  // even (1,1,..) fails n1 Y <= K

    const long double ba = static_cast<long double>(t.b) / t.a;
    const long double ca = static_cast<long double>(t.c) / t.a;
    const std::uint32_t n2_cap =
        static_cast<std::uint32_t>(expl(logl(K) / ba) + 2.0L);
    const std::uint32_t n3_cap =
        static_cast<std::uint32_t>(expl(logl(K) / ca) + 2.0L);
    std::vector<std::uint32_t> spf;
    if (rt) spf = spf_sieve(std::max(n2_cap, n3_cap) + 1);
    std::vector<Factor> f2, f3;

    long double re = 0.0L, im = 0.0L;
    for (std::uint32_t n2 = 1;; ++n2) {
        const long double y2 = powl(static_cast<long double>(n2), ba);
        if (y2 > K * (1.0L + 1e-12L)) break;
        for (std::uint32_t n3 = 1;; ++n3) {
            const long double y = y2 * powl(static_cast<long double>(n3), ca);
            if (y > K * (1.0L + 1e-12L)) break;

            bool integral;
            if (rt) {
                integral = integral_root(n2, n3, *rt, spf,
                                         static_cast<std::uint64_t>(K) + 2, f2, f3)
                               .has_value();
            } else {
                integral = fabsl(y - nearbyintl(y)) < 1e-9L;
                if (integral) ++res.flagged;
            }
            if (integral) continue;  // the star filter

            const long double lo_real =
                std::max(t.a * n2 * n2 / t.b, t.a * n3 * n3 / t.c) / y;
            const std::uint64_t n1_lo = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(ceill(lo_real - 1e-12L)));
            const long double hi_real = std::min(y, K / y);
            const std::uint64_t n1_hi =
                static_cast<std::uint64_t>(floorl(hi_real + 1e-12L));
            if (n1_lo > n1_hi) continue;

            const long double w =
                powl(static_cast<long double>(n2), 0.5L * ba - 0.5L) *
                powl(static_cast<long double>(n3), 0.5L * ca - 0.5L);
            for (std::uint64_t n1 = n1_lo; n1 <= n1_hi; ++n1) {
                const long double cyc = static_cast<long double>(n1) * y;
                const long double th = kTwoPi * (cyc - nearbyintl(cyc));
                re += w * cosl(th);
                im += w * sinl(th);
                if (++res.term_count > kDefaultTupleCap)
                    throw resource_error("m1 term cap exceeded", kDefaultTupleCap);
            }
        }
    }
    const long double pref = kTwoPi / t.a;
    res.value = {static_cast<double>(pref * re), static_cast<double>(pref * im)};
    return res;
}

J22Result j22_sum(const ExponentTriple& t, double T) {
    require_grade(t, TripleGrade::theorem);
    if (!(T >= 0.0) || !std::isfinite(T))
        throw parameter_error("T must be finite and non-negative");

    std::optional<RationalTriple> rt;
    try {
        rt = rationalize_triple(t);
    } catch (const parameter_error&) {
    }

    J22Result res;
    const long double Tl = T;
    // N_n >= 2 pi n2^2 / b (resp. n3^2 / c) bounds the pair rectangle
    const std::uint32_t n2_cap = static_cast<std::uint32_t>(
        sqrtl(std::max(0.0L, t.b * Tl / kTwoPi)) + 2.0L);
    const std::uint32_t n3_cap = static_cast<std::uint32_t>(
        sqrtl(std::max(0.0L, t.c * Tl / kTwoPi)) + 2.0L);
    std::vector<std::uint32_t> spf;
    if (rt && n2_cap > 0) spf = spf_sieve(std::max(n2_cap, n3_cap) + 1);
    std::vector<Factor> f2, f3;

    long double re = 0.0L, im = 0.0L;
    for (std::uint32_t n2 = 1; n2 <= n2_cap; ++n2) {
        if (kTwoPi * n2 * n2 / t.b > Tl) break;
        for (std::uint32_t n3 = 1; n3 <= n3_cap; ++n3) {
            if (kTwoPi * n3 * n3 / t.c > Tl) break;
            const long double y =
                powl(static_cast<long double>(n2),
                     static_cast<long double>(t.b) / t.a) *
                powl(static_cast<long double>(n3),
                     static_cast<long double>(t.c) / t.a);
            const std::uint64_t n1 =
                static_cast<std::uint64_t>(nearbyintl(y));  // half rounds to even
            if (fabsl(y - static_cast<long double>(n1)) > 0.499L)
                ++res.half_round_flags;
            const long double nn =
                kTwoPi * std::max({static_cast<long double>(n1) * n1 / t.a,
                                   static_cast<long double>(n2) * n2 / t.b,
                                   static_cast<long double>(n3) * n3 / t.c});
            if (nn > Tl) continue;
            ++res.pair_count;

            const long double p = static_cast<long double>(n1) * n2 * n3;
            const long double root = 1.0L / sqrtl(p);
            bool l_zero;
            long double l = t.b * logl(static_cast<long double>(n2)) +
                            t.c * logl(static_cast<long double>(n3)) -
                            t.a * logl(static_cast<long double>(n1));
            if (rt) {
                const auto exact = integral_root(n2, n3, *rt, spf, n1 + 1, f2, f3);
                l_zero = exact.has_value() && *exact == n1;
            } else {
                l_zero = fabsl(l) < 1e-12L;
            }
            if (l_zero) {
                ++res.l_zero_count;
                re += root * (Tl - nn);
                continue;
            }
            // (e^{iTL} - e^{iN L}) / (iL)
            const long double thT = Tl * l, thN = nn * l;
            const long double dre = cosl(thT) - cosl(thN);
            const long double dim = sinl(thT) - sinl(thN);
            re += root * dim / l;
            im += root * -dre / l;
        }
    }
    res.value = {static_cast<double>(re), static_cast<double>(im)};
    return res;
}

ResidualReport assemble_residual(const ExponentTriple& t, double T,
                                 const QuadratureSpec& quad) {
    require_grade(t, TripleGrade::theorem);
    if (!(T >= 0.0) || T > 2000.0)
        throw parameter_error("residual assembly is limited to 0 <= T <= 2000");
    const RationalTriple rt = rationalize_triple(t);

    ResidualReport rep;
    rep.T = T;
    rep.sigma = sigma_series(rt, kSigmaDefaultPmax).value;
    if (T > 0.0) {
        rep.integral = moment_integral(t, T, quad).value;
        rep.m1 = m1_sum(t, T).value;
        rep.j22 = j22_sum(t, T).value;
        const long double lt = logl(static_cast<long double>(T));
        rep.envelope = static_cast<double>(
            powl(T, 0.75L) * lt +
            powl(T, 0.5L + 0.5L * t.a / t.c) * lt * lt +
            powl(T, 1.25L - 0.25L * t.c / t.a));
    }
    rep.residual_abs =
        std::abs(rep.integral - rep.sigma * T - rep.m1 - rep.j22);
    return rep;
}

}  // namespace trisum
