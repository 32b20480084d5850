#pragma once

// Saddle-point analysis of the phase G(t) = -t log X - g(t) attached to a
// lattice tuple, where g(t) = sum_j a_j t (log(|a_j| t / 2) - 1) over the
// signed tuple (a, -b, -c).  G' vanishes at t = c (the tuple's saddle
// height), G'' = (b+c-a)/t, and the stationary-phase prediction for
// e^{-i pi/4} integral e^{iG} dt is lambda c^{1/2} e^{iG(c)}.

#include "trisum/lattice.hpp"
#include "trisum/params.hpp"

namespace trisum {

struct PhaseContext {
    ExponentTriple triple;
    Tuple3 n;
    DerivedConstants consts;
    TupleGeometry geom;
    double log_x = 0.0;  // log(n2^b n3^c / n1^a)
};

// requires theorem grade
PhaseContext make_phase_context(const ExponentTriple& t, const Tuple3& n);

struct PhaseValues {
    double g = 0.0;    // G(t)
    double g1 = 0.0;   // G'(t)
    double g2 = 0.0;   // G''(t)
};

PhaseValues phase_eval(const PhaseContext& ctx, double t);

struct OscIntegral {
    cplx value;
    double est_error = 0.0;
    std::uint64_t evals = 0;
};

// integral_{t0}^{t1} e^{i G(t)} dt, adaptive Simpson with initial panels no
// wider than 2 pi / (5 max |G'|) over the panel.
OscIntegral oscillatory_integral(const PhaseContext& ctx, double t0, double t1,
                                 double abs_tol = 1e-7, int max_subdivisions = 30);

struct SpTerm {
    cplx mu;         // P^{-1/2} c^{1/2} e^{iG(c)}
    cplx main;       // lambda c^{1/2} e^{iG(c)}
    double g_at_c;   // G(c) = -(b+c-a) c
};

SpTerm sp_main_term(const PhaseContext& ctx);

struct SpComparison {
    cplx quadrature;  // e^{-i pi/4} integral over [c/f, c f]
    cplx prediction;  // lambda c^{1/2} e^{iG(c)}
    double abs_err = 0.0;
    double rel_err = 0.0;
};

// f > 1 fixes the symmetric window [c/f, c f] around the saddle.
SpComparison sp_compare(const PhaseContext& ctx, double f = 2.0,
                        double abs_tol = 1e-7);

}  // namespace trisum
