#pragma once

// Lattice tuples (n1, n2, n3) and the two-sided domains the sum engines run
// over.  Each tuple carries the monomial X = n2^b n3^c n1^{-a}, the scale
// tau = 2 pi (n1 n2 n3)^{2/3} (abc)^{-1/3}, and the saddle height
// c = eta X^{1/(b+c-a)}.  A domain keeps tuples whose X (resp. c) lands in a
// window [lower(P), T]; see DomainConvention below.

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "trisum/params.hpp"

namespace trisum {

struct Tuple3 {
    std::uint64_t n1 = 1, n2 = 1, n3 = 1;
    friend bool operator==(const Tuple3&, const Tuple3&) = default;
};

struct TupleGeometry {
    double tau = 0.0;  // 2 pi (n1 n2 n3)^{2/3} (abc)^{-1/3}
    double c = 0.0;    // eta * X^{1/(b+c-a)}
    double x = 0.0;    // n2^b n3^c n1^{-a}
};

// requires theorem grade
TupleGeometry tuple_geometry(const ExponentTriple& t, const Tuple3& n);

// paper:  (n1 n2 n3)^{2/3} (abc)^{-1/3} <= X <= T
// window: tau <= c <= T
// Both comparisons are non-strict and evaluated in 80-bit precision; tuples
// within 1e-12 relative of either boundary are reported through a side
// channel so callers can audit rounding sensitivity.
enum class DomainConvention { paper, window };

struct DomainSpec {
    ExponentTriple triple;
    double T = 0.0;
    DomainConvention convention = DomainConvention::paper;
};

inline constexpr std::uint64_t kDefaultTupleCap = 100'000'000;

// Inclusive n1 range; chunks partition the domain along the n1 axis.
struct DomainChunk {
    std::uint64_t n1_lo = 1;
    std::uint64_t n1_hi = 0;
};

// Streams every member of `spec` with n1 in `chunk`, in lexicographic
// (n1, n2, n3) order.  `near_boundary` marks tuples within the guard band.
// Throws resource_error once more than `cap` tuples have been emitted.
void visit_domain(const DomainSpec& spec, const DomainChunk& chunk,
                  std::uint64_t cap,
                  const std::function<void(const Tuple3&, bool near_boundary)>& fn);

struct EnumerationResult {
    std::vector<Tuple3> tuples;              // lexicographic order
    std::vector<std::size_t> near_boundary;  // indices into `tuples`
};

EnumerationResult enumerate_domain(const DomainSpec& spec,
                                   std::uint64_t cap = kDefaultTupleCap);

std::uint64_t count_domain(const DomainSpec& spec,
                           std::uint64_t cap = kDefaultTupleCap);

// At most k contiguous, non-empty n1 ranges covering the domain, balanced by
// member count as far as the per-n1 distribution allows.
std::vector<DomainChunk> chunk_domain(const DomainSpec& spec, unsigned k,
                                      std::uint64_t cap = kDefaultTupleCap);

// CSV with header "n1,n2,n3,tau,c,X"; floats carry 17 significant digits.
void write_domain_csv(std::ostream& os, const DomainSpec& spec,
                      const EnumerationResult& e);

}  // namespace trisum
