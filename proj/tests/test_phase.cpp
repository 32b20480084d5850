#include "doctest.h"

#include <cmath>
#include <complex>

#include "trisum/phase.hpp"

using namespace trisum;

namespace {

const ExponentTriple kT{0.5, 0.9, 0.6};

// independent fixed-grid Simpson on e^{iG} for cross-checking the adaptive path
cplx grid_simpson(const PhaseContext& ctx, double t0, double t1, int n) {
    auto f = [&](double t) {
        const double g = phase_eval(ctx, t).g;
        return cplx{std::cos(g), std::sin(g)};
    };
    cplx acc = f(t0) + f(t1);
    const double h = (t1 - t0) / n;
    for (int i = 1; i < n; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * f(t0 + i * h);
    return acc * (h / 3.0);
}

}  // namespace

TEST_CASE("derivatives match central differences") {
    const PhaseContext ctx = make_phase_context(kT, {2, 31, 3});
    for (const double t : {5.0, 20.0, 80.0, 400.0}) {
        const double h = t * 1e-5;
        const auto lo = phase_eval(ctx, t - h);
        const auto mid = phase_eval(ctx, t);
        const auto hi = phase_eval(ctx, t + h);
        const double d1 = (hi.g - lo.g) / (2.0 * h);
        const double d2 = (hi.g - 2.0 * mid.g + lo.g) / (h * h);
        CHECK(mid.g1 == doctest::Approx(d1).epsilon(1e-7));
        CHECK(mid.g2 == doctest::Approx(d2).epsilon(1e-4));
    }
}

TEST_CASE("saddle identities") {
    for (const Tuple3 n : {Tuple3{1, 50, 1}, Tuple3{3, 17, 5}, Tuple3{2, 400, 7}}) {
        const PhaseContext ctx = make_phase_context(kT, n);
        const double denom = kT.b + kT.c - kT.a;
        const double cn = ctx.geom.c;
        const auto at_c = phase_eval(ctx, cn);
        CHECK(std::fabs(at_c.g1) < 1e-10);
        CHECK(at_c.g == doctest::Approx(-denom * cn).epsilon(1e-12));
        CHECK(at_c.g2 == doctest::Approx(denom / cn).epsilon(1e-12));

        const SpTerm sp = sp_main_term(ctx);
        CHECK(sp.g_at_c == doctest::Approx(at_c.g).epsilon(1e-12));
        const double p = double(n.n1) * double(n.n2) * double(n.n3);
        CHECK(std::abs(sp.mu) == doctest::Approx(std::sqrt(cn / p)).epsilon(1e-12));
        CHECK(std::abs(sp.main) ==
              doctest::Approx(ctx.consts.lambda * std::sqrt(cn)).epsilon(1e-12));
        CHECK(std::abs(sp.main / sp.mu - ctx.consts.lambda * std::sqrt(p)) < 1e-9);
    }
}

TEST_CASE("adaptive integral matches a dense fixed grid") {
    const PhaseContext ctx = make_phase_context(kT, {1, 20, 1});
    const double cn = ctx.geom.c;
    const auto r = oscillatory_integral(ctx, cn / 2.0, cn * 2.0, 1e-8);
    const cplx ref = grid_simpson(ctx, cn / 2.0, cn * 2.0, 200000);
    CHECK(std::abs(r.value - ref) < 1e-6);
    CHECK(r.est_error < 1e-7);
    CHECK(r.evals > 50);
}

TEST_CASE("prediction approaches the quadrature as the saddle height grows") {
    double prev = 1.0;
    for (const std::uint64_t n2 : {100ull, 400ull, 1600ull}) {
        const PhaseContext ctx = make_phase_context(kT, {1, n2, 1});
        const auto cmp = sp_compare(ctx, 2.0, 1e-7);
        CHECK(cmp.rel_err < 0.15);
        CHECK(cmp.rel_err < prev);
        prev = cmp.rel_err;
        CHECK(cmp.abs_err == doctest::Approx(std::abs(cmp.quadrature - cmp.prediction)));
    }
}

TEST_CASE("phase argument guards") {
    const PhaseContext ctx = make_phase_context(kT, {1, 5, 1});
    CHECK_THROWS_AS(phase_eval(ctx, 0.0), parameter_error);
    CHECK_THROWS_AS(phase_eval(ctx, -3.0), parameter_error);
    CHECK_THROWS_AS(oscillatory_integral(ctx, 5.0, 5.0), parameter_error);
    CHECK_THROWS_AS(oscillatory_integral(ctx, 0.0, 5.0), parameter_error);
    CHECK_THROWS_AS(sp_compare(ctx, 1.0), parameter_error);
    CHECK_THROWS_AS(make_phase_context({0.2, 0.8, 0.4}, {1, 1, 1}), parameter_error);
}
