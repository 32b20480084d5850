#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trisum/expsum.hpp"

using namespace trisum;

namespace {

const ExponentTriple kT{0.5, 0.9, 0.6};

// plain sequential long-double sum over the enumerated domain, with the term
// written out directly; exercises the engine's weights, phases, and reduction
// against an independent expression
std::complex<long double> oracle_sum_s(const DomainSpec& spec) {
    const auto dc = derive_constants(spec.triple);
    std::complex<long double> acc = 0.0L;
    for (const Tuple3& n : enumerate_domain(spec).tuples) {
        const long double lx =
            spec.triple.b * logl((long double)n.n2) +
            spec.triple.c * logl((long double)n.n3) -
            spec.triple.a * logl((long double)n.n1);
        const long double w =
            expl(0.5L * (spec.triple.b - 1.0L) * logl((long double)n.n2) +
                 0.5L * (spec.triple.c - 1.0L) * logl((long double)n.n3) -
                 0.5L * (1.0L + spec.triple.a) * logl((long double)n.n1));
        const long double theta = (long double)dc.eta * expl(lx);
        acc += w * std::complex<long double>(cosl(theta), sinl(theta));
    }
    return acc;
}

}  // namespace

TEST_CASE("weights at frozen points") {
    CHECK(weight_omega(kT, 4, 1, 1) == doctest::Approx(std::pow(4.0, -0.05)).epsilon(1e-14));
    CHECK(weight_omega(kT, 1, 4, 1) == doctest::Approx(std::pow(4.0, -0.2)).epsilon(1e-14));
    CHECK(weight_omega(kT, 1, 1, 4) == doctest::Approx(std::pow(4.0, -0.75)).epsilon(1e-14));
    CHECK(weight_omega(kT, 1, 1, 1) == 1.0);
    CHECK_THROWS_AS(weight_omega(kT, 0, 1, 1), parameter_error);
}

TEST_CASE("engine agrees with the direct long-double sum") {
    for (const DomainSpec spec : {DomainSpec{kT, 300.0, DomainConvention::paper},
                                  DomainSpec{kT, 900.0, DomainConvention::window}}) {
        const auto r = sum_s(spec);
        const auto ref = oracle_sum_s(spec);
        REQUIRE(r.term_count > 0);
        CHECK(r.term_count == count_domain(spec));
        const double tol = 1e-13 * (double)r.term_count + 1e-12;
        CHECK(std::abs(r.value - cplx((double)ref.real(), (double)ref.imag())) < tol);
    }
}

TEST_CASE("empty domain sums to zero") {
    const auto r = sum_s({kT, 100.0, DomainConvention::window});
    CHECK(r.value == cplx{0.0, 0.0});
    CHECK(r.term_count == 0);
}

TEST_CASE("chunking and thread count do not move the value") {
    const DomainSpec spec{kT, 300.0, DomainConvention::paper};
    const auto base = sum_s(spec);
    for (const unsigned k : {2u, 5u, 32u}) {
        SumOptions opt;
        opt.chunks = k;
        const auto r = sum_s(spec, opt);
        CHECK(r.term_count == base.term_count);
        CHECK(std::abs(r.value - base.value) < 1e-10);

        SumOptions serial = opt;
        serial.threads = 1;
        const auto s = sum_s(spec, serial);
        // same partition, different scheduling: bit-identical
        CHECK(s.value.real() == r.value.real());
        CHECK(s.value.imag() == r.value.imag());
    }
}

TEST_CASE("double and extended phase paths agree at moderate height") {
    const DomainSpec spec{kT, 300.0, DomainConvention::paper};
    SumOptions d, e;
    d.precision = PhasePrecision::dbl;
    e.precision = PhasePrecision::extended;
    const auto rd = sum_s(spec, d);
    const auto re = sum_s(spec, e);
    CHECK(rd.precision == PhasePrecision::dbl);
    CHECK(re.precision == PhasePrecision::extended);
    CHECK(std::abs(rd.value - re.value) < 1e-9);
}

TEST_CASE("saddle sum is the conjugated weighted sum, rescaled") {
    const double T = 900.0;
    const auto dc = derive_constants(kT);
    const auto ws = sum_s({kT, T, DomainConvention::window});
    const auto ms = sum_mu(kT, T);
    REQUIRE(ms.term_count > 0);
    CHECK(ms.term_count == ws.term_count);
    const cplx expect = std::sqrt(dc.eta) * std::conj(ws.value);
    CHECK(std::abs(ms.value - expect) < 1e-10 * (1.0 + std::abs(expect)));
}

TEST_CASE("unit phases dominate the oscillating sum") {
    const DomainSpec spec{kT, 300.0, DomainConvention::paper};
    SumOptions flat;
    flat.unit_phases = true;
    const auto bound = sum_s(spec, flat);
    const auto osc = sum_s(spec);
    CHECK(bound.value.imag() == 0.0);
    CHECK(std::abs(osc.value) <= bound.value.real() * (1.0 + 1e-12));
    CHECK(osc.max_phase == doctest::Approx(bound.max_phase));
    CHECK(osc.max_phase > 1.0);  // many cycles at this height
}

TEST_CASE("growth fit recovers an exact power law") {
    std::vector<std::pair<double, double>> pts;
    for (const double T : {10.0, 100.0, 1000.0, 10000.0})
        pts.emplace_back(T, 0.7 * std::pow(T, 1.25));
    const auto fit = fit_growth(pts);
    CHECK(fit.exponent == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(0.7)).epsilon(1e-10));
    CHECK(fit.r2 == doctest::Approx(1.0));
    CHECK(fit.used == 4);
    CHECK(fit.dropped == 0);

    pts.emplace_back(500.0, 0.0);  // dropped, not fatal
    CHECK(fit_growth(pts).dropped == 1);

    CHECK_THROWS_AS(fit_growth({{10.0, 1.0}, {20.0, 2.0}}), parameter_error);
    CHECK_THROWS_AS(fit_growth({{10.0, 1.0}, {10.0, 2.0}, {10.0, 3.0}}),
                    parameter_error);
}

TEST_CASE("cache stores and retrieves exact keys only") {
    const auto root = std::filesystem::temp_directory_path() / "trisum_cache_test";
    std::filesystem::remove_all(root);
    SumCache cache(root);

    CacheKey key{0.5, 0.6, "paper", 300.0, PhasePrecision::dbl};
    CHECK(!cache.lookup(key).has_value());

    cache.store(key, {{1.5, -2.5}, 42});
    auto hit = cache.lookup(key);
    REQUIRE(hit.has_value());
    CHECK(hit->value == cplx{1.5, -2.5});
    CHECK(hit->term_count == 42);

    CacheKey other = key;
    other.T = 301.0;
    CHECK(!cache.lookup(other).has_value());
    other = key;
    other.precision = PhasePrecision::extended;
    CHECK(!cache.lookup(other).has_value());

    // duplicate store: the newer row wins
    cache.store(key, {{3.0, 4.0}, 43});
    hit = cache.lookup(key);
    REQUIRE(hit.has_value());
    CHECK(hit->value == cplx{3.0, 4.0});

    // rows from another engine version are ignored
    {
        std::ofstream out(cache.file_for(key), std::ios::app);
        out << "77,1,1,1,double,0.0.1\n";
    }
    CacheKey v{0.5, 0.6, "paper", 77.0, PhasePrecision::dbl};
    CHECK(!cache.lookup(v).has_value());

    CHECK_THROWS_AS(cache.lookup({0.5, 0.6, "bogus", 1.0, PhasePrecision::dbl}),
                    parameter_error);
    std::filesystem::remove_all(root);
}

TEST_CASE("sum options guards") {
    SumOptions opt;
    opt.chunks = 0;
    CHECK_THROWS_AS(sum_s({kT, 50.0, DomainConvention::paper}, opt), parameter_error);
    SumOptions tiny;
    tiny.cap = 3;
    CHECK_THROWS_AS(sum_s({kT, 300.0, DomainConvention::paper}, tiny),
                    resource_error);
}
