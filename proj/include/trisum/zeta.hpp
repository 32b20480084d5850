#pragma once

// Critical-line zeta values via Euler-Maclaurin, the three-factor product
// zeta(1/2 + iat) zeta(1/2 - ibt) zeta(1/2 - ict), and its integral over
// [0, T].  All internals run in 80-bit precision; reported error bounds are
// truncation bounds, honest rather than tight.

#include <cstdint>

#include "trisum/common.hpp"
#include "trisum/params.hpp"

namespace trisum {

struct ZetaResult {
    cplx value;
    double err_bound = 0.0;  // absolute
    std::uint64_t terms = 0; // direct terms used
};

// zeta(1/2 + it).  |t| <= 1e6.  The direct sum runs over
// N >= max(10, |t|/2) terms, the tail is N^{1-s}/(s-1) - N^{-s}/2 plus
// twelve Bernoulli corrections, and N doubles until the remainder bound
// drops under tol.
ZetaResult zeta_critical(double t, double tol = 1e-13);

// zeta(1/2 + iat) zeta(1/2 - ibt) zeta(1/2 - ict) to absolute accuracy ~tol;
// the per-factor budget is rebalanced once against the measured magnitudes
// of the other two factors.
cplx product_integrand(const ExponentTriple& t, double tt, double tol = 1e-10);

enum class QuadratureRule { adaptive_simpson, gauss_legendre };

struct QuadratureSpec {
    double abs_tol = 1e-6;
    int max_subdivisions = 24;
    QuadratureRule rule = QuadratureRule::adaptive_simpson;
};

struct IntegralResult {
    cplx value;
    double est_error = 0.0;
    std::uint64_t evals = 0;
};

// integral_0^T of the product integrand.  0 <= T <= 5000.  Base panels are
// capped at width 2 pi / (5 (a+b+c) max(1, log T)) so the oscillation is
// resolved before any adaptive refinement starts.
IntegralResult moment_integral(const ExponentTriple& t, double T,
                               const QuadratureSpec& quad = {});

}  // namespace trisum
