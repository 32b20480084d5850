#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "trisum/moment.hpp"

using namespace trisum;

namespace {

const ExponentTriple kT{0.5, 0.9, 0.6};
const RationalTriple kRt{6, 9, 7, 10};  // (3/5, 9/10, 7/10)

// brute-force oracle over the cleared-denominator equation, checked in
// 128-bit integer arithmetic; independent of the factorization route
bool brute_equal(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3,
                 const RationalTriple& rt) {
    auto ipow = [](std::uint64_t base, std::int64_t e, bool& over) -> __int128 {
        __int128 r = 1;
        const __int128 cap = (__int128)1 << 126;
        for (std::int64_t i = 0; i < e; ++i) {
            r *= base;
            if (r >= cap) { over = true; return 0; }
        }
        return r;
    };
    bool o1 = false, o2 = false, o3 = false;
    const __int128 lhs = ipow(n1, rt.pa, o1);
    const __int128 rhs2 = ipow(n2, rt.pb, o2);
    const __int128 rhs3 = ipow(n3, rt.pc, o3);
    // a side past 2^126 cannot equal one that fits (ranges checked by caller)
    if (o1 || o2 || o3) return false;
    if (rhs2 > ((__int128)1 << 126) / rhs3) return false;
    return lhs == rhs2 * rhs3;
}

std::vector<DiagonalSolution> brute_solutions(const RationalTriple& rt,
                                              std::uint64_t p_max) {
    std::vector<DiagonalSolution> out;
    for (std::uint64_t n2 = 1; n2 <= p_max; ++n2) {
        for (std::uint64_t n3 = 1; n2 * n3 <= p_max; ++n3) {
            for (std::uint64_t n1 = 1; n1 * n2 * n3 <= p_max; ++n1) {
                if (brute_equal(n1, n2, n3, rt)) out.push_back({n1, n2, n3});
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("rationalization round trip") {
    const auto rt = rationalize_triple(kT);
    CHECK(rt.q == 10);
    CHECK(rt.pa == 5);
    CHECK(rt.pb == 9);
    CHECK(rt.pc == 6);
    const auto t2 = rt.to_triple();
    CHECK(t2.a == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t2.c == doctest::Approx(0.6).epsilon(1e-14));

    const auto rt2 = rationalize_triple({0.6, 0.9, 0.7});
    CHECK(rt2.q == 10);
    CHECK(rt2.pa == 6);

    CHECK_THROWS_AS(rationalize_triple({1.0 / 67.0, 1.0, 1.0 / std::sqrt(2.0)}),
                    parameter_error);
}

TEST_CASE("diagonal solutions match the 128-bit brute force") {
    for (const auto& rt : {kRt, RationalTriple{5, 9, 6, 10}}) {
        for (const std::uint64_t pm : {1ull, 100ull, 5000ull}) {
            const auto fast = diagonal_solutions(rt, pm);
            const auto slow = brute_solutions(rt, pm);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t i = 0; i < fast.size(); ++i) {
                CHECK(fast[i].n1 == slow[i].n1);
                CHECK(fast[i].n2 == slow[i].n2);
                CHECK(fast[i].n3 == slow[i].n3);
            }
        }
    }
}

TEST_CASE("known diagonal members") {
    const auto sols = diagonal_solutions(kRt, 1000000);
    auto has = [&](std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) {
        for (const auto& d : sols)
            if (d.n1 == n1 && d.n2 == n2 && d.n3 == n3) return true;
        return false;
    };
    CHECK(has(1, 1, 1));      // the unit solution
    CHECK(has(8, 4, 1));      // 8^{3/5} = 4^{9/10}, P = 32
    CHECK(has(128, 1, 64));   // 128^{3/5} = 64^{7/10}, P = 8192
    CHECK_THROWS_AS(diagonal_solutions(kRt, 0), parameter_error);
}

TEST_CASE("sigma series truncations nest") {
    const auto lo = sigma_series(kRt, 10000);
    const auto hi = sigma_series(kRt, 1000000);
    CHECK(lo.value >= 1.0);  // unit solution
    CHECK(hi.value >= lo.value);
    CHECK(hi.solution_count >= lo.solution_count);
    CHECK(hi.value <= lo.value + lo.tail_bound);

    // value equals the direct sum over the enumerated solutions
    long double direct = 0.0L;
    for (const auto& d : diagonal_solutions(kRt, 10000))
        direct += 1.0L / sqrtl((long double)(d.n1 * d.n2 * d.n3));
    CHECK(lo.value == doctest::Approx((double)direct).epsilon(1e-14));

    // and the two named members carry their advertised weights
    CHECK(1.0 / std::sqrt(32.0) == doctest::Approx(0.17678).epsilon(1e-4));
    CHECK(1.0 / std::sqrt(8192.0) == doctest::Approx(0.01105).epsilon(1e-3));
}

TEST_CASE("partial diagonal sums approach sigma from below") {
    const auto s = sigma_series(kRt, 1000000);
    double prev_gap = 2.0 * s.value;
    for (const double T : {100.0, 1000.0, 10000.0}) {
        const double part = diag_partial(kRt, T);
        CHECK(part <= s.value * T * (1.0 + 1e-12));
        const double gap = std::fabs(part / T - s.value);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(diag_partial(kRt, 5.0) == 0.0);  // below the first tau
}

TEST_CASE("diag partial brute cross-check at T = 100") {
    // tau = 2 pi P^{2/3} (abc)^{-1/3}; only solutions with P <= ~2000 matter
    const ExponentTriple t = kRt.to_triple();
    const long double abc = (long double)t.a * t.b * t.c;
    long double expect = 0.0L;
    for (const auto& d : brute_solutions(kRt, 2000)) {
        const long double p = (long double)(d.n1 * d.n2 * d.n3);
        const long double tau = kTwoPi * powl(p, 2.0L / 3.0L) * powl(abc, -1.0L / 3.0L);
        if (tau <= 100.0L) expect += (100.0L - tau) / sqrtl(p);
    }
    CHECK(diag_partial(kRt, 100.0) == doctest::Approx((double)expect).epsilon(1e-14));
}

TEST_CASE("m1 empty at low heights and star-filtered") {
    const auto r = m1_sum(kT, 10.0);
    CHECK(r.value == cplx{0.0, 0.0});
    CHECK(r.term_count == 0);
    CHECK(r.star_exact);

    // (n2, n3) = (1, 1) has Y = 1, an integer: excluded at every height
    for (const double T : {100.0, 500.0}) {
        const auto big = m1_sum(kT, T);
        // brute force the same definition and compare
        const double a = kT.a, b = kT.b, c = kT.c;
        const long double K = a * T / kTwoPi;
        std::complex<long double> acc = 0.0L;
        std::uint64_t terms = 0;
        const RationalTriple rt{5, 9, 6, 10};
        for (std::uint64_t n2 = 1; n2 <= 64; ++n2) {
            for (std::uint64_t n3 = 1; n3 <= 4096; ++n3) {
                const long double y = powl((long double)n2, (long double)b / a) *
                                      powl((long double)n3, (long double)c / a);
                // star: y integral, exact via the cleared equation with n1 = [y]
                const std::uint64_t yr = (std::uint64_t)nearbyintl(y);
                if (yr >= 1 && brute_equal(yr, n2, n3, rt)) continue;
                for (std::uint64_t n1 = 1; (long double)n1 * y <= K; ++n1) {
                    const long double nn =
                        kTwoPi * std::max({(long double)n1 * n1 / a,
                                           (long double)n2 * n2 / b,
                                           (long double)n3 * n3 / c});
                    if (nn > kTwoPi / a * n1 * y) continue;
                    const long double th = kTwoPi * (n1 * y - nearbyintl(n1 * y));
                    const long double w = powl((long double)n2, 0.5L * b / a - 0.5L) *
                                          powl((long double)n3, 0.5L * c / a - 0.5L);
                    acc += w * std::complex<long double>(cosl(th), sinl(th));
                    ++terms;
                }
            }
        }
        acc *= kTwoPi / a;
        CHECK(big.term_count == terms);
        CHECK(std::abs(big.value - cplx((double)acc.real(), (double)acc.imag())) <
              1e-10);
    }
}

TEST_CASE("j22 degenerate pair and brute cross-check") {
    // T = 20: only the (1,1) pair qualifies; L = 0 there
    const auto low = j22_sum(kT, 20.0);
    CHECK(low.pair_count == 1);
    CHECK(low.l_zero_count == 1);
    CHECK(low.value.real() == doctest::Approx(20.0 - kTwoPi / kT.a).epsilon(1e-13));
    CHECK(low.value.imag() == 0.0);

    CHECK(j22_sum(kT, 5.0).pair_count == 0);  // below every N_n

    const auto r = j22_sum(kT, 500.0);
    // brute: same pairs, inner integral by fine Simpson quadrature
    const double a = kT.a, b = kT.b, c = kT.c;
    std::complex<long double> acc = 0.0L;
    std::uint64_t pairs = 0;
    for (std::uint64_t n2 = 1; kTwoPi * n2 * n2 / b <= 500.0; ++n2) {
        for (std::uint64_t n3 = 1; kTwoPi * n3 * n3 / c <= 500.0; ++n3) {
            const long double y = powl((long double)n2, (long double)b / a) *
                                  powl((long double)n3, (long double)c / a);
            const std::uint64_t n1 = (std::uint64_t)nearbyintl(y);
            const long double nn = kTwoPi * std::max({(long double)n1 * n1 / a,
                                                      (long double)n2 * n2 / b,
                                                      (long double)n3 * n3 / c});
            if (nn > 500.0L) continue;
            ++pairs;
            const long double l = b * logl((long double)n2) + c * logl((long double)n3) -
                                  a * logl((long double)n1);
            // composite Simpson over [N, T] of e^{itL}
            const int m = 40000;
            const long double h = (500.0L - nn) / m;
            std::complex<long double> integ = 0.0L;
            for (int i = 0; i <= m; ++i) {
                const long double tt = nn + i * h;
                const long double wgt = (i == 0 || i == m) ? 1.0L : (i % 2 ? 4.0L : 2.0L);
                integ += wgt * std::complex<long double>(cosl(tt * l), sinl(tt * l));
            }
            integ *= h / 3.0L;
            acc += integ / sqrtl((long double)(n1 * n2 * n3));
        }
    }
    CHECK(r.pair_count == pairs);
    CHECK(std::abs(r.value - cplx((double)acc.real(), (double)acc.imag())) < 1e-8);
}

TEST_CASE("residual assembly wiring") {
    QuadratureSpec quad;
    quad.abs_tol = 1e-5;
    const auto rep = assemble_residual(kT, 150.0, quad);
    CHECK(rep.T == 150.0);
    CHECK(rep.sigma >= 1.0);
    CHECK(rep.envelope > 0.0);
    CHECK(rep.residual_abs ==
          doctest::Approx(std::abs(rep.integral - rep.sigma * 150.0 - rep.m1 - rep.j22))
              .epsilon(1e-12));
    // envelope formula, written out independently
    const double lt = std::log(150.0);
    const double env = std::pow(150.0, 0.75) * lt +
                       std::pow(150.0, 0.5 + kT.a / (2.0 * kT.c)) * lt * lt +
                       std::pow(150.0, 1.25 - kT.c / (4.0 * kT.a));
    CHECK(rep.envelope == doctest::Approx(env).epsilon(1e-12));

    const auto zero = assemble_residual(kT, 0.0, quad);
    CHECK(zero.integral == cplx{0.0, 0.0});
    CHECK(zero.m1 == cplx{0.0, 0.0});
    CHECK(zero.j22 == cplx{0.0, 0.0});
    CHECK(zero.residual_abs == 0.0);
    CHECK(zero.envelope == 0.0);

    CHECK_THROWS_AS(assemble_residual(kT, 2500.0, QuadratureSpec{}), parameter_error);
}

TEST_CASE("moment module guards") {
    CHECK_THROWS_AS(sigma_series({5, 9, 6, 100}, 100), parameter_error);  // q > 64
    CHECK_THROWS_AS(sigma_series({9, 5, 6, 10}, 100), parameter_error);   // a > b
    CHECK_THROWS_AS(diagonal_solutions(kRt, 1ull << 60), resource_error);
    CHECK_THROWS_AS(m1_sum({0.2, 0.8, 0.4}, 100.0), parameter_error);
    CHECK_THROWS_AS(j22_sum(kT, -5.0), parameter_error);
}
