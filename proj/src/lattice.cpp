#include "trisum/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace trisum {

TupleGeometry tuple_geometry(const ExponentTriple& t, const Tuple3& n) {
    require_grade(t, TripleGrade::theorem);
    const DerivedConstants d = derive_constants(t);
    const double denom = t.b + t.c - t.a;
    TupleGeometry g;
    const double p = static_cast<double>(n.n1) * static_cast<double>(n.n2) *
                     static_cast<double>(n.n3);
    g.tau = kTwoPi * std::pow(p, 2.0 / 3.0) * std::pow(d.q_a, -1.0 / 3.0);
    g.x = std::exp(t.b * std::log(static_cast<double>(n.n2)) +
                   t.c * std::log(static_cast<double>(n.n3)) -
                   t.a * std::log(static_cast<double>(n.n1)));
    g.c = d.eta * std::pow(g.x, 1.0 / denom);
    return g;
}

namespace {

// Scales (s1, s2) express both conventions as one predicate pair:
//   lower:  s1 * P^{2/3} (abc)^{-1/3} <= s2 * X
//   upper:  s2 * X <= T
// with (2*pi, eta) for `window` and (1, 1) for `paper`.
struct DomainScan {
    double a, b, c;
    long double s1, s2, T;
    long double q13;          // (abc)^{-1/3}
    double pmax;              // members satisfy n1 n2 n3 <= pmax
    bool narrow;              // c < 2/3: per-(n1,n2) member set is a prefix in n3

    long double upper_margin(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) const {
        long double x = powl((long double)n2, b) * powl((long double)n3, c) /
                        powl((long double)n1, a);
        return T - s2 * x;
    }
    long double lower_margin(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) const {
        long double x = powl((long double)n2, b) * powl((long double)n3, c) /
                        powl((long double)n1, a);
        long double p = (long double)n1 * (long double)n2 * (long double)n3;
        return s2 * x - s1 * powl(p, 2.0L / 3.0L) * q13;
    }
    bool upper_ok(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) const {
        return upper_margin(n1, n2, n3) >= 0.0L;
    }
    bool lower_ok(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) const {
        return lower_margin(n1, n2, n3) >= 0.0L;
    }
    bool near_boundary(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) const {
        long double um = upper_margin(n1, n2, n3);
        long double lm = lower_margin(n1, n2, n3);
        long double x = powl((long double)n2, b) * powl((long double)n3, c) /
                        powl((long double)n1, a);
        return fabsl(um) < 1e-12L * T || fabsl(lm) < 1e-12L * (s2 * x + 1.0L);
    }
};

DomainScan make_scan(const DomainSpec& spec) {
    require_grade(spec.triple, TripleGrade::theorem);
    if (!(spec.T >= 1.0) || !std::isfinite(spec.T))
        throw parameter_error("domain cutoff T must be finite and >= 1");
    const auto& t = spec.triple;
    DomainScan s;
    s.a = t.a; s.b = t.b; s.c = t.c;
    const long double abc = (long double)t.a * t.b * t.c;
    s.q13 = powl(abc, -1.0L / 3.0L);
    if (spec.convention == DomainConvention::window) {
        const double eta = derive_constants(t).eta;
        s.s1 = 2.0L * 3.14159265358979323846264338327950288L;
        s.s2 = eta;
        s.pmax = std::sqrt((double)abc) * std::pow(spec.T / kTwoPi, 1.5) * (1.0 + 1e-9) + 4.0;
    } else {
        s.s1 = 1.0L;
        s.s2 = 1.0L;
        s.pmax = std::sqrt((double)abc) * std::pow(spec.T, 1.5) * (1.0 + 1e-9) + 4.0;
    }
    s.T = spec.T;
    s.narrow = t.c < 2.0 / 3.0 - 1e-9;
    return s;
}

// Largest n3 in [1, n3_cap] satisfying pred, assuming pred is true on a
// prefix.  `est` seeds the search; the walk repairs estimate error exactly.
template <class Pred>
std::uint64_t prefix_end(double est, std::uint64_t n3_cap, Pred pred) {
    if (n3_cap == 0) return 0;
    std::uint64_t h = 0;
    if (est >= 1.0)
        h = std::min(n3_cap, (std::uint64_t)std::min(est + 2.0, 4.0e18));
    while (h + 1 <= n3_cap && pred(h + 1)) ++h;
    while (h >= 1 && !pred(h)) --h;
    return h;
}

// Smallest n3 >= 1 satisfying pred, assuming pred is true on a suffix;
// returns n3_cap + 1 when pred fails on all of [1, n3_cap].
template <class Pred>
std::uint64_t suffix_begin(double est, std::uint64_t n3_cap, Pred pred) {
    std::uint64_t l = 1;
    if (est > 1.0) l = (std::uint64_t)std::min(est, 4.0e18);
    if (l > n3_cap) l = n3_cap;
    while (l > 1 && pred(l - 1)) --l;
    while (l <= n3_cap && !pred(l)) ++l;
    return l;
}

struct PairRange {
    std::uint64_t lo = 1, hi = 0;  // inclusive; empty when lo > hi
};

PairRange n3_range(const DomainScan& s, std::uint64_t n1, std::uint64_t n2) {
    PairRange r;
    const double wd = (double)s.s2 * std::pow((double)n2, s.b) / std::pow((double)n1, s.a);
    const std::uint64_t n3_cap =
        (std::uint64_t)std::max(0.0, s.pmax / ((double)n1 * (double)n2));
    if (n3_cap == 0) return r;

    auto upper = [&](std::uint64_t n3) { return s.upper_ok(n1, n2, n3); };
    auto lower = [&](std::uint64_t n3) { return s.lower_ok(n1, n2, n3); };

    const double u_est = std::pow((double)s.T / wd, 1.0 / s.c);
    std::uint64_t hi = prefix_end(u_est, n3_cap, upper);
    if (hi == 0) return r;

    const double vd = (double)s.s1 * std::pow((double)n1 * (double)n2, 2.0 / 3.0) *
                      (double)s.q13;
    if (s.c < 2.0 / 3.0 - 1e-9) {
        // lower predicate true on an n3 prefix
        const double l_est = std::pow(wd / vd, 1.0 / (2.0 / 3.0 - s.c));
        r.lo = 1;
        r.hi = std::min(hi, prefix_end(l_est, n3_cap, lower));
    } else if (s.c > 2.0 / 3.0 + 1e-9) {
        // lower predicate true on an n3 suffix
        const double l_est = std::pow(vd / wd, 1.0 / (s.c - 2.0 / 3.0));
        r.lo = suffix_begin(l_est, n3_cap, lower);
        r.hi = hi;
    } else {
        // c ~ 2/3: the lower predicate barely depends on n3; test pointwise
        r.lo = 1;
        while (r.lo <= hi && !lower(r.lo)) ++r.lo;
        r.hi = r.lo;
        while (r.hi + 1 <= hi && lower(r.hi + 1)) ++r.hi;
        if (r.lo > hi) { r.lo = 1; r.hi = 0; }
    }
    return r;
}

void scan_domain(const DomainScan& s, std::uint64_t n1_lo, std::uint64_t n1_hi,
                 std::uint64_t cap, std::uint64_t& emitted,
                 const std::function<void(const Tuple3&, bool)>& fn) {
    const bool shortcut = s.narrow && s.b > 2.0 / 3.0 + 1e-9;
    for (std::uint64_t n1 = n1_lo; n1 <= n1_hi && (double)n1 <= s.pmax; ++n1) {
        const double n2cap_raw =
            std::pow((double)s.T * std::pow((double)n1, s.a) / (double)s.s2, 1.0 / s.b);
        std::uint64_t n2_hi = (std::uint64_t)std::min(
            std::max(n2cap_raw + 2.0, 0.0), s.pmax / (double)n1);
        std::uint64_t n2_lo = 1;
        if (shortcut) {
            // members need the lower predicate at n3 = 1, which bounds n2 below
            const double n2min_raw =
                std::pow((double)(s.s1 / s.s2) * (double)s.q13 *
                             std::pow((double)n1, s.a + 2.0 / 3.0),
                         1.0 / (s.b - 2.0 / 3.0));
            // The min/cap ratio grows with n1, so once the band closes it
            // stays closed for every larger n1.
            if (n2min_raw > n2cap_raw + 4.0) break;
            if (n2min_raw > 3.0) n2_lo = (std::uint64_t)(n2min_raw - 2.0);
        }
        for (std::uint64_t n2 = n2_lo; n2 <= n2_hi; ++n2) {
            const PairRange r = n3_range(s, n1, n2);
            for (std::uint64_t n3 = r.lo; n3 <= r.hi; ++n3) {
                if (++emitted > cap)
                    throw resource_error("domain tuple count exceeds cap", cap);
                const bool flag = (n3 <= r.lo + 1 || n3 + 1 >= r.hi) &&
                                  s.near_boundary(n1, n2, n3);
                fn({n1, n2, n3}, flag);
            }
        }
    }
}

}  // namespace

void visit_domain(const DomainSpec& spec, const DomainChunk& chunk,
                  std::uint64_t cap,
                  const std::function<void(const Tuple3&, bool)>& fn) {
    const DomainScan s = make_scan(spec);
    if (chunk.n1_hi < chunk.n1_lo) return;
    std::uint64_t emitted = 0;
    scan_domain(s, chunk.n1_lo, chunk.n1_hi, cap, emitted, fn);
}

EnumerationResult enumerate_domain(const DomainSpec& spec, std::uint64_t cap) {
    EnumerationResult out;
    visit_domain(spec, {1, ~std::uint64_t{0}}, cap,
                 [&out](const Tuple3& n, bool flag) {
                     if (flag) out.near_boundary.push_back(out.tuples.size());
                     out.tuples.push_back(n);
                 });
    return out;
}

std::uint64_t count_domain(const DomainSpec& spec, std::uint64_t cap) {
    std::uint64_t n = 0;
    visit_domain(spec, {1, ~std::uint64_t{0}}, cap,
                 [&n](const Tuple3&, bool) { ++n; });
    return n;
}

std::vector<DomainChunk> chunk_domain(const DomainSpec& spec, unsigned k,
                                      std::uint64_t cap) {
    if (k == 0) throw parameter_error("chunk count must be positive");
    const DomainScan s = make_scan(spec);

    // counting pass: members per n1
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_n1;  // (n1, count)
    {
        std::uint64_t emitted = 0;
        scan_domain(s, 1, ~std::uint64_t{0}, cap, emitted,
                    [&per_n1](const Tuple3& n, bool) {
                        if (per_n1.empty() || per_n1.back().first != n.n1)
                            per_n1.emplace_back(n.n1, 0);
                        ++per_n1.back().second;
                    });
    }
    std::vector<DomainChunk> chunks;
    if (per_n1.empty()) return chunks;

    std::uint64_t total = 0;
    for (const auto& [n1, cnt] : per_n1) total += cnt;

    std::uint64_t remaining = total;
    unsigned slots = std::min<std::uint64_t>(k, per_n1.size());
    std::size_t i = 0;
    while (i < per_n1.size()) {
        const std::uint64_t target = (remaining + slots - 1) / slots;
        DomainChunk ch{per_n1[i].first, per_n1[i].first};
        std::uint64_t acc = 0;
        while (i < per_n1.size() && (acc == 0 || (acc + per_n1[i].second <= target ||
                                                  slots == 1))) {
            ch.n1_hi = per_n1[i].first;
            acc += per_n1[i].second;
            ++i;
            if (acc >= target && slots > 1) break;
        }
        chunks.push_back(ch);
        remaining -= acc;
        if (slots > 1) --slots;
    }
    return chunks;
}

void write_domain_csv(std::ostream& os, const DomainSpec& spec,
                      const EnumerationResult& e) {
    os << "n1,n2,n3,tau,c,X\n";
    char buf[96];
    for (const Tuple3& n : e.tuples) {
        const TupleGeometry g = tuple_geometry(spec.triple, n);
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.17g,%.17g,%.17g\n",
                      (unsigned long long)n.n1, (unsigned long long)n.n2,
                      (unsigned long long)n.n3, g.tau, g.c, g.x);
        os << buf;
    }
}

}  // namespace trisum
