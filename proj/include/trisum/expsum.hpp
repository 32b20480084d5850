#pragma once

// The weighted exponential sums themselves: S(T) sums
// omega(h,n,m) e(kappa h^b n^c m^{-a}) over a lattice domain, and the
// saddle-height sum accumulates mu(n) = P^{-1/2} c^{1/2} e^{iG(c)} over the
// window tau <= c <= T.  A domain tuple (n1, n2, n3) enters S(T) as
// (h, n, m) = (n2, n3, n1), which makes the two sums match termwise:
// |mu(n)| = eta^{1/2} omega(n2, n3, n1) and the phases agree.
//
// Determinism contract: terms are accumulated per chunk with compensated
// (Kahan) sums and chunk results are combined through a fixed-shape pairwise
// tree, so the value is a function of the chunk partition only, never of
// thread scheduling.

#include <filesystem>
#include <optional>

#include "trisum/lattice.hpp"

namespace trisum {

enum class PhasePrecision { dbl, extended };

// h^{(b-1)/2} n^{(c-1)/2} m^{-(1+a)/2}
double weight_omega(const ExponentTriple& t, std::uint64_t h, std::uint64_t n,
                    std::uint64_t m);

struct SumResult {
    cplx value;
    std::uint64_t term_count = 0;
    unsigned chunks = 1;
    PhasePrecision precision = PhasePrecision::dbl;
    double max_phase = 0.0;        // largest |argument| seen, in cycles
    std::uint64_t near_boundary = 0;
};

struct SumOptions {
    unsigned chunks = 1;
    // default: extended above T = 1e4, double below
    std::optional<PhasePrecision> precision;
    std::uint64_t cap = kDefaultTupleCap;
    unsigned threads = 0;          // 0: one per chunk, capped by hardware
    bool unit_phases = false;      // replace e(ix) by 1 (triangle bound probe)
};

// S(T) over the domain in `spec`
SumResult sum_s(const DomainSpec& spec, const SumOptions& opt = {});

// sum of mu(n) over the window tau <= c <= T (convention pinned to `window`)
SumResult sum_mu(const ExponentTriple& t, double T, const SumOptions& opt = {});

struct GrowthFit {
    double exponent = 0.0;   // slope of log|S| against log T
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t used = 0;    // samples with nonzero magnitude
    std::size_t dropped = 0;
};

// least squares on (log T, log magnitude); throws parameter_error when
// fewer than three nonzero samples survive
GrowthFit fit_growth(const std::vector<std::pair<double, double>>& samples);

// ---- result cache ----------------------------------------------------------
// Layout: <root>/<a>_<c>_<label>/sums.csv with label paper|window|mu, rows
// "T,value_re,value_im,term_count,precision,engine_version".  A row is a hit
// only when T, precision, and engine version all match exactly.

struct CacheKey {
    double a = 0.0, c = 0.0;
    std::string label;       // paper | window | mu
    double T = 0.0;
    PhasePrecision precision = PhasePrecision::dbl;
};

struct CacheEntry {
    cplx value;
    std::uint64_t term_count = 0;
};

class SumCache {
public:
    explicit SumCache(std::filesystem::path root) : root_(std::move(root)) {}
    std::optional<CacheEntry> lookup(const CacheKey& key) const;
    void store(const CacheKey& key, const CacheEntry& entry) const;
    std::filesystem::path file_for(const CacheKey& key) const;

private:
    std::filesystem::path root_;
};

}  // namespace trisum
