#pragma once

// Compact double-double arithmetic: an unevaluated sum hi + lo with
// |lo| <= ulp(hi)/2, giving ~31 significant decimal digits.  Used where a
// phase argument of size ~1e5 must be known to ~1e-12 absolute, i.e. well
// past what one double carries.  Only the operations the engines need are
// implemented; error-free transforms follow Dekker/Knuth, exp uses the
// usual ln2 range reduction with a degree-limited Taylor tail, log refines
// a double seed by one Newton step through exp.

#include <cmath>
#include <cstdint>

namespace trisum {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b|
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline dd dd_add(dd a, dd b) {
    using namespace dd_detail;
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_add(dd a, double b) {
    using namespace dd_detail;
    dd s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }
inline dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(dd a, dd b) {
    using namespace dd_detail;
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_mul(dd a, double b) {
    using namespace dd_detail;
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd dd_div(dd a, dd b) {
    // one Newton-ish correction on the double quotient, then a residual pass
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    double q3 = r.hi / b.hi;
    dd q = dd_detail::quick_two_sum(q1, q2);
    return dd_add(q, q3);
}

inline constexpr dd dd_ln2{0.693147180559945286e0, 2.319046813846299558e-17};
inline constexpr dd dd_2pi{6.283185307179586232e0, 2.449293598294706414e-16};

// exp(a) for |a| up to ~700.  Range-reduce by ln 2, Taylor on |r| <= ln2/2.
inline dd dd_exp(dd a) {
    if (a.hi > 709.0) return {HUGE_VAL, 0.0};
    if (a.hi < -709.0) return {0.0, 0.0};
    double k = std::nearbyint(a.hi / dd_ln2.hi);
    dd r = dd_sub(a, dd_mul(dd_ln2, k));
    // sum r^n/n! until it drops below the dd noise floor
    dd sum = dd_add(dd(1.0), r);
    dd term = r;
    for (int n = 2; n <= 24; ++n) {
        term = dd_mul(term, r);
        term = dd_mul(term, 1.0 / static_cast<double>(n));
        sum = dd_add(sum, term);
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    return dd_mul(sum, std::ldexp(1.0, static_cast<int>(k)));
}

// log(x) for x > 0: Newton step y <- y + (x e^{-y} - 1) on a double seed.
inline dd dd_log(dd x) {
    double y0 = std::log(x.hi);
    dd e = dd_exp(dd(-y0));
    dd u = dd_sub(dd_mul(x, e), dd(1.0));       // u = x e^{-y0} - 1, |u| ~ 1e-16
    dd corr = dd_sub(u, dd_mul(dd_mul(u, u), 0.5));
    return dd_add(dd_add(dd(y0), corr.hi), corr.lo);
}

inline dd dd_log(double x) { return dd_log(dd(x)); }

// fractional part centered to [-0.5, 0.5]
inline dd dd_centered_frac(dd x) {
    double n = std::nearbyint(x.hi);
    dd f = dd_add(x, -n);
    if (f.hi > 0.5) f = dd_add(f, -1.0);
    if (f.hi < -0.5) f = dd_add(f, 1.0);
    return f;
}

// reduce x modulo 2*pi into roughly [-pi, pi]
inline dd dd_mod_2pi(dd x) {
    double k = std::nearbyint(x.hi / dd_2pi.hi);
    return dd_sub(x, dd_mul(dd_2pi, k));
}

}  // namespace trisum
