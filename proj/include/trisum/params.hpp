#pragma once

// Exponent triples (a, b, c) with b + c - a = 1 drive every engine in this
// library: the sum domains, the phase normalizations, and the bound
// exponents all derive from them.  This header owns validation, the derived
// constants, and the admissibility test for the signed tuple (a, -b, -c).

#include <string>
#include <vector>

#include "trisum/common.hpp"

namespace trisum {

struct ExponentTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// b is determined by the normalization b + c - a = 1.
ExponentTriple triple_from_ac(double a, double c);

enum class TripleGrade { invalid, basic, theorem };

struct ValidationReport {
    TripleGrade grade = TripleGrade::invalid;
    std::vector<std::string> reasons;  // empty when theorem-grade
};

// basic:   0 < a < c <= b and b + c - a = 1 (to 1e-12)
// theorem: additionally c < b and c < 2a
ValidationReport validate_triple(const ExponentTriple& t);

// throws parameter_error unless the triple reaches the required grade
void require_grade(const ExponentTriple& t, TripleGrade min_grade);

// Signed exponent tuple (a_1, ..., a_k), all entries nonzero.  The triple
// (a, b, c) embeds as (a, -b, -c).
struct AdmissibleTuple {
    std::vector<double> entries;
};

AdmissibleTuple tuple_from_triple(const ExponentTriple& t);

struct DerivedConstants {
    int xi = 0;          // #{a_j > 0} - #{a_j < 0}
    double i_a = 0.0;    // sum of 1/a_j
    double q_a = 0.0;    // product of a_j
    double eta = 0.0;    // 2 (a^a / (b^b c^c))^{1/(b+c-a)}
    double kappa = 0.0;  // eta / 2 pi
    double lambda = 0.0; // (b+c-a)^{-1/2} sqrt(2 pi)
    double alpha = 0.0;  // 1 / (8 + i_a^2)
    double c_alpha = 0.0;// 7 alpha / 8
};

DerivedConstants derive_constants(const ExponentTriple& t);

// Per-entry sides of the admissibility inequality
//   a_j^2 > (pi/4) (-xi a_j + sum_l |a_l| - sum_l |a_l - a_j|).
struct AdmissibilityEntry {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs - rhs
};

struct AdmissibilityReport {
    bool admissible = false;
    int xi = 0;
    std::vector<AdmissibilityEntry> entries;
};

AdmissibilityReport check_admissibility(const AdmissibleTuple& tuple);

// Exponents of the competing growth bounds for the weighted sum, plus the
// comparison window (42a + 34c)/55 < b < 2a + c in which the first pair is
// provably sharpest.
struct ExponentTable {
    double theorem_e1 = 0.0;  // 5/4 - c/(4a)
    double theorem_e2 = 0.0;  // 1/4 + (2a-c)/(2(b-c))
    double vdc_e = 0.0;       // 3/4 + (2a-c)/(2(b-c))
    double ep_e = 0.0;        // 19/21 + (2a-c)/(4(b-c))
    std::string winner;       // "theorem" | "vdc" | "ep"
    bool in_range13 = false;
};

// requires theorem grade (and b > c so the slopes are finite)
ExponentTable exponent_table(const ExponentTriple& t);

}  // namespace trisum
