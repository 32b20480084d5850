#include "trisum/expsum.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <string_view>
#include <thread>

#include "trisum/dd.hpp"

namespace trisum {

namespace {

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

struct ChunkAccum {
    Kahan re, im;
    std::uint64_t terms = 0;
    std::uint64_t near_boundary = 0;
    double max_phase = 0.0;  // cycles
};

// Phase angle theta (radians, reduced) plus its size in cycles for one term.
struct Angle {
    double theta;
    double cycles;
};

enum class SumKind { weighted, saddle };

// weighted: theta = eta * X       (i.e. e(kappa X))
// saddle:   theta = -(b+c-a) c_n  (i.e. e^{iG(c_n)})
Angle term_angle(SumKind kind, const ExponentTriple& t,
                 const DerivedConstants& dc, const Tuple3& n,
                 PhasePrecision prec) {
    const double denom = t.b + t.c - t.a;
    if (prec == PhasePrecision::dbl) {
        const long double lx = t.b * logl(static_cast<long double>(n.n2)) +
                               t.c * logl(static_cast<long double>(n.n3)) -
                               t.a * logl(static_cast<long double>(n.n1));
        long double theta;
        if (kind == SumKind::weighted) {
            theta = static_cast<long double>(dc.eta) * expl(lx);
        } else {
            theta = -static_cast<long double>(denom) * dc.eta *
                    expl(lx / static_cast<long double>(denom));
        }
        const double cycles = static_cast<double>(fabsl(theta)) / kTwoPi;
        return {static_cast<double>(
                    fmodl(theta, 2.0L * 3.14159265358979323846264338328L)),
                cycles};
    }
    const dd lx = dd_add(
        dd_sub(dd_mul(dd_log(static_cast<double>(n.n2)), t.b),
               dd_mul(dd_log(static_cast<double>(n.n1)), t.a)),
        dd_mul(dd_log(static_cast<double>(n.n3)), t.c));
    dd theta;
    if (kind == SumKind::weighted) {
        theta = dd_mul(dd_exp(lx), dc.eta);
    } else {
        theta = dd_mul(dd_exp(dd_div(lx, dd(denom))), -denom * dc.eta);
    }
    const double cycles = std::fabs(theta.to_double()) / kTwoPi;
    const dd red = dd_mod_2pi(theta);
    // first-order correction for the low word keeps the unit phase honest
    const double th = red.hi;
    return {th + red.lo, cycles};
}

struct EngineSpec {
    SumKind kind;
    DomainSpec domain;
    DerivedConstants dc;
};

SumResult run_engine(const EngineSpec& eng, const SumOptions& opt) {
    require_grade(eng.domain.triple, TripleGrade::theorem);
    if (opt.chunks == 0) throw parameter_error("chunk count must be positive");

    const PhasePrecision prec = opt.precision.value_or(
        eng.domain.T > 1e4 ? PhasePrecision::extended : PhasePrecision::dbl);
    const ExponentTriple& t = eng.domain.triple;
    const double denom = t.b + t.c - t.a;

    const auto chunks = chunk_domain(eng.domain, opt.chunks, opt.cap);
    SumResult res;
    res.chunks = static_cast<unsigned>(std::max<std::size_t>(1, chunks.size()));
    res.precision = prec;
    if (chunks.empty()) return res;

    std::vector<ChunkAccum> acc(chunks.size());
    std::atomic<std::uint64_t> emitted{0};

    auto worker = [&](std::size_t i) {
        ChunkAccum& a = acc[i];
        visit_domain(eng.domain, chunks[i], opt.cap, [&](const Tuple3& n, bool nb) {
            if (emitted.fetch_add(1, std::memory_order_relaxed) >= opt.cap)
                throw resource_error("tuple cap exceeded", opt.cap);
            double mag;
            if (eng.kind == SumKind::weighted) {
                mag = weight_omega(t, n.n2, n.n3, n.n1);
            } else {
                // P^{-1/2} c^{1/2}; c_n is cheap enough to recompute here
                const double cn =
                    eng.dc.eta *
                    static_cast<double>(expl(
                        (t.b * logl(static_cast<long double>(n.n2)) +
                         t.c * logl(static_cast<long double>(n.n3)) -
                         t.a * logl(static_cast<long double>(n.n1))) /
                        static_cast<long double>(denom)));
                const double p = static_cast<double>(n.n1) *
                                 static_cast<double>(n.n2) *
                                 static_cast<double>(n.n3);
                mag = std::sqrt(cn / p);
            }
            const Angle ang = term_angle(eng.kind, t, eng.dc, n, prec);
            if (ang.cycles > a.max_phase) a.max_phase = ang.cycles;
            if (opt.unit_phases) {
                a.re.add(mag);
            } else {
                a.re.add(mag * std::cos(ang.theta));
                a.im.add(mag * std::sin(ang.theta));
            }
            ++a.terms;
            if (nb) ++a.near_boundary;
        });
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned want = opt.threads == 0 ? hw : opt.threads;
    const unsigned nthreads =
        std::max(1u, std::min<unsigned>(want, static_cast<unsigned>(chunks.size())));

    if (nthreads == 1) {
        for (std::size_t i = 0; i < chunks.size(); ++i) worker(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex err_mu;
        for (unsigned w = 0; w < nthreads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= chunks.size()) return;
                    try {
                        worker(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    // fixed-shape pairwise tree over chunk index
    std::vector<cplx> partial(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        partial[i] = {acc[i].re.sum, acc[i].im.sum};
        res.term_count += acc[i].terms;
        res.near_boundary += acc[i].near_boundary;
        res.max_phase = std::max(res.max_phase, acc[i].max_phase);
    }
    while (partial.size() > 1) {
        std::vector<cplx> next((partial.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = 2 * i + 1 < partial.size()
                          ? partial[2 * i] + partial[2 * i + 1]
                          : partial[2 * i];
        }
        partial.swap(next);
    }
    res.value = partial[0];
    return res;
}

const char* precision_name(PhasePrecision p) {
    return p == PhasePrecision::dbl ? "double" : "extended";
}

bool parse_precision(const std::string& s, PhasePrecision& out) {
    if (s == "double") { out = PhasePrecision::dbl; return true; }
    if (s == "extended") { out = PhasePrecision::extended; return true; }
    return false;
}

void require_label(const std::string& label) {
    if (label != "paper" && label != "window" && label != "mu")
        throw parameter_error("cache label must be paper, window, or mu");
}

}  // namespace

double weight_omega(const ExponentTriple& t, std::uint64_t h, std::uint64_t n,
                    std::uint64_t m) {
    if (h == 0 || n == 0 || m == 0)
        throw parameter_error("weight arguments must be positive");
    const long double e = 0.5L * (t.b - 1.0L) * logl(static_cast<long double>(h)) +
                          0.5L * (t.c - 1.0L) * logl(static_cast<long double>(n)) -
                          0.5L * (1.0L + t.a) * logl(static_cast<long double>(m));
    return static_cast<double>(expl(e));
}

SumResult sum_s(const DomainSpec& spec, const SumOptions& opt) {
    EngineSpec eng{SumKind::weighted, spec, derive_constants(spec.triple)};
    return run_engine(eng, opt);
}

SumResult sum_mu(const ExponentTriple& t, double T, const SumOptions& opt) {
    EngineSpec eng{SumKind::saddle,
                   DomainSpec{t, T, DomainConvention::window},
                   derive_constants(t)};
    return run_engine(eng, opt);
}

GrowthFit fit_growth(const std::vector<std::pair<double, double>>& samples) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [T, mag] : samples) {
        if (T > 0.0 && mag > 0.0 && std::isfinite(T) && std::isfinite(mag))
            pts.emplace_back(std::log(T), std::log(mag));
    }
    GrowthFit fit;
    fit.used = pts.size();
    fit.dropped = samples.size() - pts.size();
    if (pts.size() < 3)
        throw parameter_error("growth fit needs at least three nonzero samples");

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) { mx += x; my += y; }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) throw parameter_error("growth fit needs distinct T values");
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ssres = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (fit.intercept + fit.exponent * x);
        ssres += r * r;
    }
    fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ssres / syy;
    return fit;
}

std::filesystem::path SumCache::file_for(const CacheKey& key) const {
    require_label(key.label);
    char dir[96];
    std::snprintf(dir, sizeof dir, "%.17g_%.17g_%s", key.a, key.c,
                  key.label.c_str());
    return root_ / dir / "sums.csv";
}

std::optional<CacheEntry> SumCache::lookup(const CacheKey& key) const {
    std::ifstream in(file_for(key));
    if (!in) return std::nullopt;
    std::optional<CacheEntry> found;  // last match wins
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'T') continue;  // header or blank
        double T = 0.0, re = 0.0, im = 0.0;
        unsigned long long terms = 0;
        char prec_buf[16] = {0}, ver_buf[32] = {0};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%llu,%15[^,],%31s", &T, &re,
                        &im, &terms, prec_buf, ver_buf) != 6)
            continue;
        PhasePrecision prec;
        if (!parse_precision(prec_buf, prec)) continue;
        if (T == key.T && prec == key.precision &&
            std::string_view(ver_buf) == kEngineVersion)
            found = CacheEntry{{re, im}, terms};
    }
    return found;
}

void SumCache::store(const CacheKey& key, const CacheEntry& entry) const {
    const auto path = file_for(key);
    std::filesystem::create_directories(path.parent_path());
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw resource_error("cannot open cache file for writing", 0);
    if (fresh) out << "T,value_re,value_im,term_count,precision,engine_version\n";
    char row[160];
    std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%llu,%s,%s\n", key.T,
                  entry.value.real(), entry.value.imag(),
                  static_cast<unsigned long long>(entry.term_count),
                  precision_name(key.precision), kEngineVersion);
    out << row;
}

}  // namespace trisum
