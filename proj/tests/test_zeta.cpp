#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "trisum/zeta.hpp"

using namespace trisum;

namespace {

// Independent oracle: Borwein's alternating-series algorithm through the
// eta function, zeta(s) = eta(s) / (1 - 2^{1-s}).  Nothing here is shared
// with the Euler-Maclaurin path.
std::complex<long double> borwein_zeta(long double t, int n) {
    const std::complex<long double> s{0.5L, t};
    // d_k proportional to sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!); the
    // overall scale cancels in (d_k - d_n) / d_n so it is left unnormalised.
    std::vector<long double> d(n + 1);
    long double term = 1.0L;
    long double sum = term;
    d[0] = sum;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0L * (long double)(n + i - 1) * (long double)(n - i + 1) /
                ((long double)(2 * i - 1) * (long double)(2 * i));
        sum += term;
        d[i] = sum;
    }

    std::complex<long double> eta = 0.0L;
    for (int k = 0; k < n; ++k) {
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        const long double ph = t * logl((long double)(k + 1));
        const std::complex<long double> kp =
            powl((long double)(k + 1), -0.5L) * std::complex<long double>(cosl(ph), -sinl(ph));
        eta += sign * (d[k] - d[n]) * kp;
    }
    eta /= -d[n];
    const std::complex<long double> one{1.0L, 0.0L};
    const std::complex<long double> denom =
        one - std::exp((one - s) * logl(2.0L));
    return eta / denom;
}

}  // namespace

TEST_CASE("zeta(1/2) against the classical value") {
    const auto r = zeta_critical(0.0);
    CHECK(r.value.real() == doctest::Approx(-1.4603545088095868).epsilon(1e-13));
    CHECK(std::fabs(r.value.imag()) < 1e-13);
    CHECK(r.err_bound < 1e-13);
}

TEST_CASE("zeta near the first critical zero is tiny") {
    const auto r = zeta_critical(14.134725);
    CHECK(std::abs(r.value) < 1e-5);
}

TEST_CASE("agrees with the alternating-series oracle") {
    for (const double t : {1.0, 14.134725, 100.0}) {
        const auto r = zeta_critical(t, 1e-13);
        const auto o = borwein_zeta((long double)t, t < 50 ? 60 : 140);
        CHECK(std::abs(r.value - cplx((double)o.real(), (double)o.imag())) < 1e-8);
    }
}

TEST_CASE("conjugate symmetry across the real axis") {
    for (const double t : {1.0, 10.0, 100.0, 1000.0}) {
        const auto up = zeta_critical(t).value;
        const auto dn = zeta_critical(-t).value;
        CHECK(std::abs(dn - std::conj(up)) < 1e-13 * (1.0 + std::abs(up)));
    }
}

TEST_CASE("doubling the direct-sum length stays inside the reported bound") {
    // em path re-run with doubled N by tightening tol: compare reported bound
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ut(1.0, 1e4);
    for (int i = 0; i < 100; ++i) {
        const double t = ut(rng);
        const auto coarse = zeta_critical(t, 1e-12);
        const auto fine = zeta_critical(t, 1e-14);  // never uses fewer terms
        CHECK(std::abs(coarse.value - fine.value) <= coarse.err_bound + 1e-15);
    }
}

TEST_CASE("product integrand at t = 0 is zeta(1/2) cubed") {
    const ExponentTriple t{0.5, 0.9, 0.6};
    const cplx v = product_integrand(t, 0.0, 1e-10);
    CHECK(v.real() == doctest::Approx(-3.1144035634431520).epsilon(1e-10));
    CHECK(std::fabs(v.imag()) < 1e-10);
}

TEST_CASE("moment integral over a short range matches a crude Riemann check") {
    const ExponentTriple t{0.5, 0.9, 0.6};
    QuadratureSpec q;
    q.abs_tol = 1e-7;
    const auto r = moment_integral(t, 5.0, q);

    // midpoint rule with a fine fixed grid as an independent cross-check
    const int n = 4000;
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = 5.0 * (i + 0.5) / n;
        acc += product_integrand(t, x, 1e-9);
    }
    acc *= 5.0 / n;
    CHECK(std::abs(r.value - acc) < 5e-5);
    CHECK(r.est_error < 1e-6);
    CHECK(r.evals > 100);
}

TEST_CASE("moment integral rules agree") {
    const ExponentTriple t{0.5, 0.9, 0.6};
    QuadratureSpec simpson;
    simpson.abs_tol = 1e-8;
    QuadratureSpec gl;
    gl.abs_tol = 1e-8;
    gl.rule = QuadratureRule::gauss_legendre;
    const auto a = moment_integral(t, 20.0, simpson);
    const auto b = moment_integral(t, 20.0, gl);
    CHECK(std::abs(a.value - b.value) < 1e-6);
}

TEST_CASE("zeta parameter guards") {
    CHECK_THROWS_AS(zeta_critical(2e6), parameter_error);
    CHECK_THROWS_AS(zeta_critical(std::nan("")), parameter_error);
    CHECK_THROWS_AS(moment_integral({0.5, 0.9, 0.6}, -1.0), parameter_error);
    CHECK_THROWS_AS(moment_integral({0.5, 0.9, 0.6}, 6000.0), parameter_error);
}
