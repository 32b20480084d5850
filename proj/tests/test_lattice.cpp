#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trisum/lattice.hpp"

using namespace trisum;

namespace {

// Reference enumeration: a plain triple loop over n1 n2 n3 <= pmax testing
// the defining inequalities directly in long double.  Deliberately naive and
// independent of the production scan's interval logic.
std::vector<Tuple3> brute_domain(const DomainSpec& spec) {
    const auto& t = spec.triple;
    const long double a = t.a, b = t.b, c = t.c;
    const long double abc = a * b * c;
    long double s1, s2, pmaxd;
    if (spec.convention == DomainConvention::window) {
        s1 = 2.0L * 3.141592653589793238462643383279503L;
        s2 = derive_constants(t).eta;
        pmaxd = sqrtl(abc) * powl((long double)spec.T / s1, 1.5L) + 2.0L;
    } else {
        s1 = 1.0L;
        s2 = 1.0L;
        pmaxd = sqrtl(abc) * powl((long double)spec.T, 1.5L) + 2.0L;
    }
    const std::uint64_t pmax = (std::uint64_t)pmaxd;
    std::vector<Tuple3> out;
    for (std::uint64_t n1 = 1; n1 <= pmax; ++n1)
        for (std::uint64_t n2 = 1; n1 * n2 <= pmax; ++n2)
            for (std::uint64_t n3 = 1; n1 * n2 * n3 <= pmax; ++n3) {
                const long double x =
                    powl((long double)n2, b) * powl((long double)n3, c) /
                    powl((long double)n1, a);
                const long double p = (long double)(n1 * n2 * n3);
                const long double lo = s1 * powl(p, 2.0L / 3.0L) * powl(abc, -1.0L / 3.0L);
                if (lo <= s2 * x && s2 * x <= (long double)spec.T)
                    out.push_back({n1, n2, n3});
            }
    return out;
}

const ExponentTriple kT{0.5, 0.9, 0.6};

}  // namespace

TEST_CASE("tuple geometry at reference points") {
    auto g = tuple_geometry(kT, {2, 3, 2});
    CHECK(g.tau == doctest::Approx(50.954136285180198).epsilon(1e-12));
    CHECK(g.c == doctest::Approx(6.0858061945018457).epsilon(1e-12));
    CHECK(g.x == doctest::Approx(2.8807935023766542).epsilon(1e-12));

    g = tuple_geometry(kT, {1, 700, 1});
    CHECK(g.c == doctest::Approx(768.05836793153256).epsilon(1e-12));
    CHECK(g.tau == doctest::Approx(766.40319572315664).epsilon(1e-12));

    g = tuple_geometry(kT, {1, 1, 1});
    CHECK(g.x == doctest::Approx(1.0));
    CHECK(g.c == doctest::Approx(2.1125450989392529).epsilon(1e-12));
    CHECK(g.tau == doctest::Approx(9.7213209204415489).epsilon(1e-12));
}

TEST_CASE("window membership of the (1,700,1) tuple flips at its saddle height") {
    const DomainSpec below{kT, 768.0, DomainConvention::window};
    const DomainSpec above{kT, 769.0, DomainConvention::window};
    auto in = [](const EnumerationResult& e, const Tuple3& n) {
        return std::find(e.tuples.begin(), e.tuples.end(), n) != e.tuples.end();
    };
    CHECK_FALSE(in(enumerate_domain(below), {1, 700, 1}));
    CHECK(in(enumerate_domain(above), {1, 700, 1}));
}

TEST_CASE("enumeration matches the brute-force reference") {
    for (const double T : {2.0, 9.7, 50.0, 300.0}) {
        for (const auto conv : {DomainConvention::paper, DomainConvention::window}) {
            const DomainSpec spec{kT, T, conv};
            auto got = enumerate_domain(spec).tuples;
            auto want = brute_domain(spec);
            CAPTURE(T);
            CAPTURE(conv == DomainConvention::paper);
            REQUIRE(got.size() == want.size());
            CHECK(got == want);  // lexicographic order on both sides
        }
    }

    // a triple with c > 2/3 exercises the suffix-shaped n3 ranges
    const ExponentTriple steep{0.45, 0.75, 0.7};
    REQUIRE(validate_triple(steep).grade == TripleGrade::theorem);
    for (const double T : {30.0, 120.0}) {
        const DomainSpec spec{steep, T, DomainConvention::window};
        CHECK(enumerate_domain(spec).tuples == brute_domain(spec));
    }
}

TEST_CASE("empty domains at tiny cutoffs") {
    CHECK(enumerate_domain({kT, 2.0, DomainConvention::paper}).tuples.empty());
    CHECK(enumerate_domain({kT, 2.0, DomainConvention::window}).tuples.empty());
    CHECK(count_domain({kT, 9.7, DomainConvention::window}) == 0);
}

TEST_CASE("tuple cap raises a resource error") {
    const DomainSpec spec{kT, 300.0, DomainConvention::paper};
    const auto n = count_domain(spec);
    REQUIRE(n > 4);
    CHECK_THROWS_AS(enumerate_domain(spec, n / 2), resource_error);
}

TEST_CASE("chunks partition the domain") {
    // paper convention populates several n1 columns at this height; the
    // window convention is single-column there, covering the one-slot path
    const DomainSpec specs[] = {{kT, 300.0, DomainConvention::paper},
                                {kT, 900.0, DomainConvention::window}};
    for (const auto& spec : specs)
    for (const unsigned k : {1u, 2u, 5u, 1000000u}) {
        const auto whole = enumerate_domain(spec).tuples;
        REQUIRE(!whole.empty());
        const auto chunks = chunk_domain(spec, k);
        REQUIRE(!chunks.empty());
        CHECK(chunks.size() <= std::max<std::size_t>(1, std::min<std::uint64_t>(k, whole.size())));
        std::vector<Tuple3> glued;
        for (const auto& ch : chunks) {
            std::size_t before = glued.size();
            visit_domain(spec, ch, kDefaultTupleCap,
                         [&](const Tuple3& n, bool) { glued.push_back(n); });
            CHECK(glued.size() > before);  // every chunk non-empty
        }
        CHECK(glued == whole);
        // contiguous, disjoint n1 ranges
        for (std::size_t i = 1; i < chunks.size(); ++i)
            CHECK(chunks[i].n1_lo > chunks[i - 1].n1_hi);
    }
}

TEST_CASE("csv export shape") {
    const DomainSpec spec{kT, 40.0, DomainConvention::paper};
    const auto e = enumerate_domain(spec);
    REQUIRE(!e.tuples.empty());
    std::ostringstream os;
    write_domain_csv(os, spec, e);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "n1,n2,n3,tau,c,X");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
    }
    CHECK(rows == e.tuples.size());
}
