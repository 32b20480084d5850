#pragma once

// Pieces of the first-moment identity for the zeta product: the diagonal
// constant sigma = sum P_n^{-1/2} over n1^a = n2^b n3^c, the off-diagonal
// main sum M1, the near-diagonal correction J22, and the residual that
// compares integral, diagonal, and corrections against the error envelope
// T^{3/4} log T + T^{1/2 + a/2c} (log T)^2 + T^{5/4 - c/4a}.

#include <cstdint>
#include <vector>

#include "trisum/params.hpp"
#include "trisum/zeta.hpp"

namespace trisum {

// Exponents as exact fractions over a shared denominator q <= 64:
// a = pa/q, b = pb/q, c = pc/q.
struct RationalTriple {
    std::int64_t pa = 0, pb = 0, pc = 0;
    std::int64_t q = 1;

    ExponentTriple to_triple() const;
};

// continued-fraction rationalization with denominator <= 64; throws
// parameter_error when (a, c) is not within 1e-9 of such a fraction
RationalTriple rationalize_triple(const ExponentTriple& t);

struct DiagonalSolution {
    std::uint64_t n1 = 0, n2 = 0, n3 = 0;  // n1^pa = n2^pb n3^pc exactly
};

// All solutions with n1 n2 n3 <= p_max, lexicographic in (n2, n3).
// Exactness comes from prime-exponent arithmetic, never floating point.
std::vector<DiagonalSolution> diagonal_solutions(const RationalTriple& rt,
                                                 std::uint64_t p_max);

struct SigmaSeries {
    double value = 0.0;       // sum P^{-1/2} over solutions with P <= p_max
    double tail_bound = 0.0;  // bound on the dropped P > p_max part
    std::uint64_t solution_count = 0;
};

// requires a < min(b, c) so the series converges
SigmaSeries sigma_series(const RationalTriple& rt, std::uint64_t p_max);

// sum over diagonal solutions with tau_n <= T of P^{-1/2} (T - tau_n);
// divided by T it converges to sigma from below
double diag_partial(const RationalTriple& rt, double T);

struct M1Result {
    cplx value;
    std::uint64_t term_count = 0;
    bool star_exact = true;        // integer test done in exact arithmetic
    std::uint64_t flagged = 0;     // near-integer tuples under the 1e-9 test
};

// M1(T) = (2 pi / a) sum* n2^{b/2a - 1/2} n3^{c/2a - 1/2} e(n1 n2^{b/a} n3^{c/a})
// over N_n <= (2 pi / a) n1 n2^{b/a} n3^{c/a} <= T, where the star drops
// tuples with n2^{b/a} n3^{c/a} integral and N_n = 2 pi max(n1^2/a, n2^2/b, n3^2/c).
M1Result m1_sum(const ExponentTriple& t, double T);

struct J22Result {
    cplx value;
    std::uint64_t pair_count = 0;
    std::uint64_t l_zero_count = 0;     // pairs with L = 0 (diagonal limit)
    std::uint64_t half_round_flags = 0; // |x - [x]| > 0.499 when rounding N1
};

// J22(T) = sum over pairs (n2, n3) with N_n <= T, n1 = [n2^{b/a} n3^{c/a}],
// of P^{-1/2} (e^{iTL} - e^{i N_n L}) / (iL), L = log(n2^b n3^c / n1^a).
J22Result j22_sum(const ExponentTriple& t, double T);

struct ResidualReport {
    double T = 0.0;
    cplx integral;
    double sigma = 0.0;       // diagonal constant (not yet scaled by T)
    cplx m1;
    cplx j22;
    double residual_abs = 0.0;  // |I - sigma T - M1 - J22|
    double envelope = 0.0;
};

// requires theorem grade and T <= 2000
ResidualReport assemble_residual(const ExponentTriple& t, double T,
                                 const QuadratureSpec& quad = {});

}  // namespace trisum
