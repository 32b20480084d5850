#pragma once

// Comparison atlas for the competing growth bounds: the two-exponent bound
// from the saddle analysis, the van der Corput route, and the exponent-pair
// route, evaluated on dyadic boxes and across the admissible (a, c) plane.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "trisum/params.hpp"

namespace trisum {

struct DyadicBox {
    double n1 = 1.0, n2 = 1.0, n3 = 1.0;  // block scales
    double x = 1.0;                        // n2^b n3^c / n1^a at the scales
};

DyadicBox make_box(const ExponentTriple& t, double n1, double n2, double n3);

// (N1 N2 N3)^{1+eps} ((X / (N1 N2 N3^2))^{1/4} + (N1 N2)^{-1/4} + N3^{-1/2} + X^{-1/2})
double rs_bound(const DyadicBox& box, double eps = 0.0);

struct GridRow {
    double a = 0.0, c = 0.0, b = 0.0;
    ExponentTable table;
};

// Uniform grid over the theorem-grade wedge 0 < a < c < min(2a, (1+a)/2)
// with b = 1 + a - c; grid point (i, j) sits at a = (i+1)/(n+1) and the
// analogous interior fraction of the c interval, so refinements share rows.
std::vector<GridRow> winner_grid(unsigned grid_n);

// CSV "a,c,b,theorem_e1,theorem_e2,vdc_e,ep_e,winner,in_range13"
void write_grid_csv(std::ostream& os, const std::vector<GridRow>& rows);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
    bool applicable = true;
};

// The structural inequalities behind the bound comparison at one triple:
// the theorem-vs-vdc gap (applicable when b < 2a + c), the range test
// 42a + 34c < 55b, and c^2 + 2a^2 < 3ac.
std::vector<InequalityCheck> appendix_inequalities(const ExponentTriple& t);

// minimum of 1092 x^2 + 336 x - 441 over (1/2, 1) sampled at `samples`
// points, plus its exact value at 1/2 (which is 0)
struct QuadraticScan {
    double min_interior = 0.0;
    double at_half = 0.0;
    bool positive_interior = false;
};

QuadraticScan scan_quadratic(unsigned samples = 10000);

}  // namespace trisum
