#include "trisum/afe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "trisum/zeta.hpp"

namespace trisum {

namespace {

// Stirling correction coefficients B_2n / (2n (2n-1)) for n = 1..12, enough
// for full double accuracy once the argument sits right of Re z = 12
constexpr double kStirling[] = {
    1.0 / 12,          -1.0 / 360,          1.0 / 1260,
    -1.0 / 1680,       1.0 / 1188,          -691.0 / 360360,
    1.0 / 156,         -3617.0 / 122400,    43867.0 / 244188,
    -174611.0 / 125400, 854513.0 / 63756,   -236364091.0 / 1506960,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178;

bool at_pole(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

void require_tuple(const AdmissibleTuple& tuple) {
    if (tuple.entries.empty() || tuple.entries.size() > 8)
        throw parameter_error("tuple must have between 1 and 8 entries");
    for (double a : tuple.entries)
        if (!(a != 0.0) || !std::isfinite(a))
            throw parameter_error("tuple entries must be nonzero and finite");
}

void require_m(int m) {
    if (m != 1 && m != 2) throw parameter_error("kernel index m must be 1 or 2");
}

void validate_contour(const ContourSpec& contour) {
    if (!(contour.real_part > 0.0) || !(contour.real_part <= 2.0))
        throw parameter_error("contour real part must lie in (0, 2]");
    if (!(contour.height_factor >= 1.0))
        throw parameter_error("height factor must be at least 1");
    if (contour.step_count < 64)
        throw parameter_error("contour needs at least 64 steps");
}

int tuple_xi(const AdmissibleTuple& tuple) {
    int xi = 0;
    for (double a : tuple.entries) xi += a > 0.0 ? 1 : -1;
    return xi;
}

double tuple_ia(const AdmissibleTuple& tuple) {
    double ia = 0.0;
    for (double a : tuple.entries) ia += 1.0 / a;
    return ia;
}

double truncation_height(const ContourSpec& contour, double t) {
    return contour.height_factor * std::sqrt(t) * std::log(t);
}

// reflecting each completed factor pi^{-s/2} Gamma(s/2) zeta(s) across
// s -> 1-s leaves behind pi^{i a_j t} per entry, so the whole m=2 side
// carries this constant rotation (exactly 1 when the entries sum to zero)
cplx reflection_rotation(const AdmissibleTuple& tuple, double t) {
    double sum = 0.0;
    for (double a : tuple.entries) sum += a;
    return std::polar(1.0, t * sum * std::log(kPi));
}

// upper estimate for |d/dy arg(kernel)| along Re z = r, |Im z| <= y_max:
// the Stirling main term contributes log A(x,t), the digamma curvature at
// most |I_a| y / 2t, the Gaussian 2|z|/t, and the 1/z pole at most 1/r
double oscillation_scale(const AdmissibleTuple& tuple, double x, double t,
                         double y_max) {
    return std::fabs(std::log(a_ratio(tuple, x, t))) +
           std::fabs(tuple_ia(tuple)) * y_max / (2.0 * t) + 2.0 * y_max / t + 1.0;
}

struct Node {
    double y = 0.0;
    double w = 0.0;
};

// 8-point Gauss-Legendre abscissas and weights on [-1, 1]
constexpr double kGlx[4] = {0.1834346424956498, 0.5255324099163290,
                            0.7966664774136267, 0.9602898564975363};
constexpr double kGlw[4] = {0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

std::vector<Node> build_nodes(double y_max, std::uint64_t step_count) {
    const std::uint64_t panels = (step_count + 7) / 8;
    const double width = 2.0 * y_max / panels;
    std::vector<Node> nodes;
    nodes.reserve(panels * 8);
    for (std::uint64_t p = 0; p < panels; ++p) {
        const double mid = -y_max + (p + 0.5) * width;
        const double half = 0.5 * width;
        for (int j = 3; j >= 0; --j) nodes.push_back({mid - half * kGlx[j], half * kGlw[j]});
        for (int j = 0; j < 4; ++j) nodes.push_back({mid + half * kGlx[j], half * kGlw[j]});
    }
    return nodes;
}

// log of the x-free kernel part: sum_j [log Gamma(1/4 + (-1)^{m+1} i a_j t/2
// + z/2) - log Gamma(1/4 + i a_j t/2)] - z (k/2) log pi + z^2/t
// - (-1)^{m+1} i xi pi z / 4
cplx kernel_log_base(const AdmissibleTuple& tuple, int m, cplx z, double t) {
    const double sgn = m == 1 ? 1.0 : -1.0;
    cplx acc = 0.0;
    for (double a : tuple.entries)
        acc += log_gamma(cplx(0.25, sgn * a * t * 0.5) + 0.5 * z) -
               log_gamma(cplx(0.25, a * t * 0.5));
    acc -= z * (0.5 * tuple.entries.size() * std::log(kPi));
    acc += z * z / t;
    acc -= cplx(0.0, sgn * tuple_xi(tuple) * kPi / 4.0) * z;
    return acc;
}

// terms beyond margin * A^{-1}(1) carry the Gaussian step suppression
// e^{-C t (log margin)^2 / 2} with C = 7/(8 (8 + I^2)); inside the
// transition band only the O(log t) bound is available
double step_tail_bound(const AdmissibleTuple& tuple, double t, double margin) {
    const double ia = tuple_ia(tuple);
    const double c = 7.0 / (8.0 * (8.0 + ia * ia));
    const double lm = std::log(margin);
    if (lm * std::sqrt(t) <= std::log(t)) return std::log(t);
    return std::exp(-c * t * lm * lm / 2.0);
}

// S(P) = sum over n_1 ... n_k = P of e^{-i t sum_j a_j log n_j}, accumulated
// in lexicographic tuple order for every product up to p_max
void accumulate_dirichlet(const std::vector<double>& entries, std::size_t depth,
                          std::uint64_t prod, double lphase, double t,
                          std::uint64_t p_max, std::vector<cplx>& s) {
    if (depth == entries.size()) {
        s[prod] += std::polar(1.0, -t * lphase);
        return;
    }
    const std::uint64_t cap = p_max / prod;
    for (std::uint64_t n = 1; n <= cap; ++n)
        accumulate_dirichlet(entries, depth + 1, prod * n,
                             lphase + entries[depth] * std::log(double(n)), t,
                             p_max, s);
}

constexpr std::uint64_t kTermCap = 2000000;
constexpr double kWorkCap = 2.5e8;  // terms times quadrature nodes

}  // namespace

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw parameter_error("log gamma needs a finite argument");
    if (at_pole(z)) throw parameter_error("log gamma pole at a non-positive integer");
    if (z.real() < -1e5) throw parameter_error("argument too far left of the poles");
    // shift right until Stirling converges; the downward recurrence
    // log Gamma(z) = log Gamma(z+1) - Log z is exact off the negative axis
    cplx shift = 0.0;
    while (z.real() < 12.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const cplx inv2 = 1.0 / (z * z);
    cplx series = 0.0;
    cplx p = 1.0 / z;
    for (double coef : kStirling) {
        series += coef * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series - shift;
}

PsiG psi_and_g(const AdmissibleTuple& tuple, double t) {
    require_tuple(tuple);
    if (!(t > 0.0) || !std::isfinite(t)) throw parameter_error("t must be positive");
    PsiG out;
    for (double a : tuple.entries)
        out.g += a * t * (std::log(std::fabs(a) * t / 2.0) - 1.0);
    out.psi = std::polar(1.0, tuple_xi(tuple) * kPi / 4.0 - out.g);
    return out;
}

cplx g_m(const AdmissibleTuple& tuple, int m, cplx z, double t) {
    require_tuple(tuple);
    require_m(m);
    if (!(t > 0.0)) throw parameter_error("t must be positive");
    const double sgn = m == 1 ? 1.0 : -1.0;
    cplx acc = 0.0;
    for (double a : tuple.entries)
        acc += log_gamma(cplx(0.25, sgn * a * t * 0.5) + 0.5 * z) -
               log_gamma(cplx(0.25, a * t * 0.5));
    return std::exp(acc);
}

cplx h_factor(const AdmissibleTuple& tuple, int m, cplx z, double t) {
    require_tuple(tuple);
    require_m(m);
    if (!(t > 0.0)) throw parameter_error("t must be positive");
    const double sgn = m == 1 ? 1.0 : -1.0;
    return std::exp(z * z / t - cplx(0.0, sgn * tuple_xi(tuple) * kPi / 4.0) * z);
}

cplx afe_kernel(const AdmissibleTuple& tuple, int m, cplx z, double t, double x) {
    require_tuple(tuple);
    require_m(m);
    if (!(t > 1.0)) throw parameter_error("kernel needs t > 1");
    if (!(x > 0.0)) throw parameter_error("kernel needs x > 0");
    if (z == cplx(0.0, 0.0)) throw parameter_error("kernel has a pole at z = 0");
    const cplx lg = kernel_log_base(tuple, m, z, t) - z * std::log(x);
    if (lg.real() > 700.0)
        throw accuracy_error("kernel overflows after log-space reduction", lg.real());
    return std::exp(lg) / z;
}

ImTerm i_m_term(const AdmissibleTuple& tuple, int m, double x, double t,
                const ContourSpec& contour) {
    require_tuple(tuple);
    require_m(m);
    validate_contour(contour);
    if (!(t > 1.0)) throw parameter_error("contour integral needs t > 1");
    if (!(x >= 1.0)) throw parameter_error("contour integral needs x >= 1");
    const double y_max = truncation_height(contour, t);
    const double freq = oscillation_scale(tuple, x, t, y_max);
    const double spacing = 2.0 * y_max / contour.step_count;
    if (spacing > kPi / (4.0 * freq))
        throw accuracy_error("step count cannot resolve the contour oscillation",
                             spacing * freq);
    const auto nodes = build_nodes(y_max, contour.step_count);
    long double re = 0.0L, im = 0.0L;
    for (const Node& node : nodes) {
        const cplx v =
            node.w * afe_kernel(tuple, m, cplx(contour.real_part, node.y), t, x);
        re += v.real();
        im += v.imag();
    }
    ImTerm out;
    out.value = cplx(double(re), double(im)) / kTwoPi;
    if (m == 2) out.value *= reflection_rotation(tuple, t);
    out.est_error = std::exp(-y_max * y_max / t);
    out.nodes = nodes.size();
    return out;
}

double a_ratio(const AdmissibleTuple& tuple, double x, double t) {
    require_tuple(tuple);
    if (!(t > 1.0)) throw parameter_error("step scale needs t > 1");
    if (!(x > 0.0)) throw parameter_error("step scale needs x > 0");
    double q = 1.0;
    for (double a : tuple.entries) q *= a;
    return std::sqrt(std::fabs(q)) *
           std::pow(t / kTwoPi, 0.5 * tuple.entries.size()) / x;
}

StepClass k_step(const AdmissibleTuple& tuple, double x, double t) {
    const double band = std::log(t) / std::sqrt(t);
    const double la = std::log(a_ratio(tuple, x, t));
    if (la > band) return StepClass::one;
    if (la < -band) return StepClass::zero;
    return StepClass::transition;
}

AfeResult afe_sum(const AdmissibleTuple& tuple, double t, double margin,
                  const ContourSpec& contour) {
    require_tuple(tuple);
    validate_contour(contour);
    if (!(t > 10.0) || !std::isfinite(t)) throw parameter_error("sum needs t > 10");
    if (!(margin >= 1.0)) throw parameter_error("margin must be at least 1");

    const double base = a_ratio(tuple, 1.0, t);
    const std::uint64_t p_max =
        std::max<std::uint64_t>(1, std::uint64_t(margin * base));
    if (p_max > kTermCap)
        throw resource_error("cutoff exceeds the term cap", kTermCap);

    const double y_max = truncation_height(contour, t);
    const double freq = std::max(oscillation_scale(tuple, 1.0, t, y_max),
                                 oscillation_scale(tuple, double(p_max), t, y_max));
    const std::uint64_t need = std::uint64_t(8.0 * y_max * freq / kPi) + 8;
    const std::uint64_t steps = std::max(contour.step_count, (need + 7) / 8 * 8);
    if (double(p_max) * double(steps) > kWorkCap)
        throw resource_error("term-by-node budget exceeded",
                             std::size_t(kWorkCap));
    const auto nodes = build_nodes(y_max, steps);

    // the kernels depend on x only through x^{-z}; precompute everything else
    // (including the Gauss weight) per node and per m
    const double r = contour.real_part;
    const cplx rot = reflection_rotation(tuple, t);
    std::vector<cplx> w1(nodes.size()), w2(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const cplx z(r, nodes[i].y);
        w1[i] = nodes[i].w * std::exp(kernel_log_base(tuple, 1, z, t)) / z;
        w2[i] = rot * nodes[i].w * std::exp(kernel_log_base(tuple, 2, z, t)) / z;
    }

    std::vector<cplx> s(p_max + 1, cplx(0.0, 0.0));
    accumulate_dirichlet(tuple.entries, 0, 1, 0.0, t, p_max, s);

    long double re = 0.0L, im = 0.0L;
    double coeff_mass = 0.0;
    for (std::uint64_t p = 1; p <= p_max; ++p) {
        const double lx = std::log(double(p));
        cplx i1 = 0.0, i2 = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const cplx ph = std::polar(1.0, -nodes[i].y * lx);
            i1 += w1[i] * ph;
            i2 += w2[i] * ph;
        }
        const double scale = std::pow(double(p), -r) / kTwoPi;
        const cplx term =
            (s[p] * (scale * i1) + std::conj(s[p]) * (scale * i2)) /
            std::sqrt(double(p));
        re += term.real();
        im += term.imag();
        coeff_mass += 2.0 * std::abs(s[p]) / std::sqrt(double(p));
    }

    AfeResult out;
    out.value = cplx(double(re), double(im));
    out.est_error = std::exp(-y_max * y_max / t) * coeff_mass +
                    step_tail_bound(tuple, t, margin);
    out.term_count = p_max;
    return out;
}

cplx direct_product(const AdmissibleTuple& tuple, double t, double tol) {
    require_tuple(tuple);
    if (!(t > 0.0) || !std::isfinite(t)) throw parameter_error("t must be positive");
    cplx prod = 1.0;
    for (double a : tuple.entries) {
        const double s = a * t;
        cplx v = zeta_critical(std::fabs(s), tol).value;
        if (s < 0.0) v = std::conj(v);
        prod *= v;
    }
    return prod;
}

AfeValidation afe_validate(const AdmissibleTuple& tuple,
                           const std::vector<double>& t_grid, double margin,
                           const ContourSpec& contour) {
    if (t_grid.empty()) throw parameter_error("validation grid is empty");
    for (double t : t_grid)
        if (!(t > 10.0)) throw parameter_error("validation grid needs t > 10");
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());

    AfeValidation out;
    out.rows.reserve(grid.size());
    for (double t : grid) {
        AfeRow row;
        row.t = t;
        row.direct = direct_product(tuple, t);
        row.afe = afe_sum(tuple, t, margin, contour).value;
        row.abs_err = std::abs(row.direct - row.afe);
        row.rel_err = row.abs_err / std::max(std::abs(row.direct), 1e-300);
        out.rows.push_back(row);
    }
    out.monotone_rel_err = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i].rel_err > out.rows[i - 1].rel_err)
            out.monotone_rel_err = false;
    return out;
}

void write_afe_csv(std::ostream& os, const AfeValidation& v) {
    os << "t,direct_re,direct_im,afe_re,afe_im,abs_err,rel_err\n";
    char buf[256];
    for (const AfeRow& row : v.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      row.t, row.direct.real(), row.direct.imag(), row.afe.real(),
                      row.afe.imag(), row.abs_err, row.rel_err);
        os << buf;
    }
}

}  // namespace trisum
