#pragma once

// Smoothed functional-equation machinery for products of critical-line zeta
// values over a signed exponent tuple (a_1, ..., a_k): contour kernels
// G_m(z,t) (pi^{k/2} x)^{-z} H((-1)^{m+1} z, t) / z, their vertical-line
// integrals I_m(x,t), and the resulting two-sided sum
//   prod_j zeta(1/2 + i a_j t) ~ sum_n P_n^{-1/2} (L(n)^{it} I_1(P_n,t)
//                                               + L(n)^{-it} I_2(P_n,t))
// with L(n) = prod n_j^{-a_j}, accurate to O(t^{-2}) once the n-sum clears
// the step cutoff A(P,t) = Q^{1/2} (t/2pi)^{k/2} / P ~ 1.

#include <vector>

#include "trisum/common.hpp"
#include "trisum/params.hpp"

namespace trisum {

// principal-branch log Gamma; Stirling with recurrence shift into |z| >= 12,
// relative error ~1e-14 away from the poles
cplx log_gamma(cplx z);

struct PsiG {
    cplx psi;     // e^{i xi pi / 4 - i g(t)}, unit modulus
    double g = 0.0;
};

PsiG psi_and_g(const AdmissibleTuple& tuple, double t);

// G_m(z, t): product over j of Gamma(1/2 (1/2 + (-1)^{m+1} i a_j t + z))
// divided by Gamma(1/2 (1/2 + i a_j t)), computed as exp of log differences
cplx g_m(const AdmissibleTuple& tuple, int m, cplx z, double t);

// H((-1)^{m+1} z, t) = exp(z^2/t - (-1)^{m+1} i xi pi z / 4)
cplx h_factor(const AdmissibleTuple& tuple, int m, cplx z, double t);

// full contour integrand (has the 1/z pole; keep z off the origin)
cplx afe_kernel(const AdmissibleTuple& tuple, int m, cplx z, double t, double x);

struct ContourSpec {
    double real_part = 1.0;
    double height_factor = 1.0;  // truncate at height_factor * sqrt(t) log t
    std::uint64_t step_count = 1024;
};

struct ImTerm {
    cplx value;
    double est_error = 0.0;  // truncation tail e^{-Y^2/t}
    std::uint64_t nodes = 0;
};

// I_m(x, t) by Gauss-Legendre panels along Re z = real_part; throws
// accuracy_error when step_count cannot resolve the oscillation scale.
// Reflecting each completed factor pi^{-s/2} Gamma(s/2) zeta(s) across
// s -> 1-s deposits a constant rotation pi^{i t sum_j a_j} on the m=2
// side, so I_2 is that multiple of its contour integral (the factor is
// 1 exactly when the tuple entries sum to zero).
ImTerm i_m_term(const AdmissibleTuple& tuple, int m, double x, double t,
                const ContourSpec& contour = {});

enum class StepClass { zero, transition, one };

// position of A(x,t) relative to the transition band |log A| <= t^{-1/2} log t
StepClass k_step(const AdmissibleTuple& tuple, double x, double t);

double a_ratio(const AdmissibleTuple& tuple, double x, double t);  // A(x,t)

struct AfeResult {
    cplx value;
    double est_error = 0.0;
    std::uint64_t term_count = 0;  // distinct P values summed
};

// the two-sided sum over all P <= margin * Q^{1/2} (t/2pi)^{k/2}
AfeResult afe_sum(const AdmissibleTuple& tuple, double t, double margin = 2.0,
                  const ContourSpec& contour = {});

// prod_j zeta(1/2 + i a_j t)
cplx direct_product(const AdmissibleTuple& tuple, double t, double tol = 1e-10);

struct AfeRow {
    double t = 0.0;
    cplx direct;
    cplx afe;
    double abs_err = 0.0;
    double rel_err = 0.0;
};

struct AfeValidation {
    std::vector<AfeRow> rows;
    bool monotone_rel_err = false;  // non-increasing along the grid
};

AfeValidation afe_validate(const AdmissibleTuple& tuple,
                           const std::vector<double>& t_grid,
                           double margin = 2.0, const ContourSpec& contour = {});

// CSV "t,direct_re,direct_im,afe_re,afe_im,abs_err,rel_err"
void write_afe_csv(std::ostream& os, const AfeValidation& v);

}  // namespace trisum
