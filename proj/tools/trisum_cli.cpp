#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trisum/afe.hpp"
#include "trisum/bounds.hpp"
#include "trisum/common.hpp"
#include "trisum/expsum.hpp"
#include "trisum/lattice.hpp"
#include "trisum/moment.hpp"
#include "trisum/params.hpp"
#include "trisum/phase.hpp"
#include "trisum/zeta.hpp"

using ojson = nlohmann::ordered_json;
using namespace trisum;

namespace {

// Resolved run configuration.  Precedence, lowest to highest: built-in
// defaults, config file ("key = value" lines), command-line flags, and the
// TRISUM_CACHE_DIR environment variable for the cache directory.
struct RunConfig {
    std::filesystem::path cache_dir = "cache";
    std::optional<PhasePrecision> default_precision;
    std::uint64_t tuple_cap = kDefaultTupleCap;
    double quad_tol = 1e-6;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool precision_from_word(const std::string& w, PhasePrecision& out) {
    if (w == "double") out = PhasePrecision::dbl;
    else if (w == "extended") out = PhasePrecision::extended;
    else return false;
    return true;
}

const char* precision_word(PhasePrecision p) {
    return p == PhasePrecision::extended ? "extended" : "double";
}

void apply_config_line(RunConfig& cfg, const std::string& key,
                       const std::string& val) {
    if (key == "cache_dir") {
        cfg.cache_dir = val;
    } else if (key == "default_precision") {
        PhasePrecision p;
        if (!precision_from_word(val, p))
            throw parameter_error("config default_precision must be double or "
                                  "extended, got '" + val + "'");
        cfg.default_precision = p;
    } else if (key == "tuple_cap") {
        try {
            cfg.tuple_cap = std::stoull(val);
        } catch (const std::exception&) {
            throw parameter_error("config tuple_cap must be an integer, got '" +
                                  val + "'");
        }
        if (cfg.tuple_cap == 0)
            throw parameter_error("config tuple_cap must be positive");
    } else if (key == "quad_tol") {
        try {
            cfg.quad_tol = std::stod(val);
        } catch (const std::exception&) {
            throw parameter_error("config quad_tol must be a real, got '" +
                                  val + "'");
        }
        if (!(cfg.quad_tol > 0.0))
            throw parameter_error("config quad_tol must be positive");
    } else {
        throw parameter_error("unknown config key '" + key + "'");
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parameter_error("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw parameter_error("config line is not 'key = value': '" +
                                  stripped + "'");
        apply_config_line(cfg, trim(stripped.substr(0, eq)),
                          trim(stripped.substr(eq + 1)));
    }
}

// Flags shared by the subcommands; resolve() folds them over the config file
// and the environment.
struct CommonFlags {
    std::string config_file;
    std::string cache_dir;
    std::uint64_t tuple_cap = 0;  // 0: not given

    void attach(CLI::App* cmd, bool with_cap) {
        cmd->add_option("--config", config_file,
                        "config file with 'key = value' lines");
        cmd->add_option("--cache-dir", cache_dir, "result cache directory");
        if (with_cap)
            cmd->add_option("--tuple-cap", tuple_cap,
                            "abort enumeration beyond this many tuples");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_file.empty()) load_config_file(cfg, config_file);
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (tuple_cap != 0) cfg.tuple_cap = tuple_cap;
        if (const char* env = std::getenv("TRISUM_CACHE_DIR"))
            if (*env != '\0') cfg.cache_dir = env;
        return cfg;
    }
};

// Exponent flags shared by the triple-based subcommands.  b defaults to the
// normalization 1 + a - c; an explicit --b is only checked against it.
struct TripleFlags {
    double a = 0.0, c = 0.0;
    std::optional<double> b;

    void attach(CLI::App* cmd) {
        cmd->add_option("--a", a, "first exponent a")->required();
        cmd->add_option("--c", c, "third exponent c")->required();
        cmd->add_option("--b", b, "second exponent b (must equal 1 + a - c)");
    }

    ExponentTriple resolve() const {
        const ExponentTriple t = triple_from_ac(a, c);
        if (b && std::fabs(*b - t.b) > 1e-12)
            throw parameter_error("b must equal 1 + a - c within 1e-12");
        return t;
    }
};

void emit(const ojson& j) {
    std::fputs(j.dump(2).c_str(), stdout);
    std::fputc('\n', stdout);
}

ojson result_header(const char* command) {
    ojson j;
    j["engine_version"] = kEngineVersion;
    j["command"] = command;
    return j;
}

ojson triple_params(const ExponentTriple& t) {
    ojson p;
    p["a"] = t.a;
    p["c"] = t.c;
    p["b"] = t.b;
    return p;
}

void write_csv(const std::string& out_file,
               const std::function<void(std::ostream&)>& writer) {
    if (out_file.empty()) {
        writer(std::cout);
        return;
    }
    std::ofstream os(out_file);
    if (!os) throw parameter_error("cannot open output file '" + out_file + "'");
    writer(os);
}

DomainConvention convention_from_word(const std::string& w) {
    if (w == "paper") return DomainConvention::paper;
    if (w == "window") return DomainConvention::window;
    throw parameter_error("convention must be paper or window");
}

PhasePrecision resolve_precision(const std::string& flag_word,
                                 const RunConfig& cfg, double T) {
    if (!flag_word.empty()) {
        PhasePrecision p;
        if (!precision_from_word(flag_word, p))
            throw parameter_error("precision must be double or extended");
        return p;
    }
    if (cfg.default_precision) return *cfg.default_precision;
    return T > 1e4 ? PhasePrecision::extended : PhasePrecision::dbl;
}

// Cached weighted-sum evaluation shared by sum, mu-sum, and fit.  The cache
// key pins T, precision, and engine version; the label separates the two
// domain conventions from the mu window.
CacheEntry cached_sum(const ExponentTriple& t, double T,
                      const std::string& label, unsigned chunks,
                      PhasePrecision prec, const RunConfig& cfg) {
    const SumCache cache(cfg.cache_dir);
    const CacheKey key{t.a, t.c, label, T, prec};
    if (auto hit = cache.lookup(key)) return *hit;

    SumOptions opt;
    opt.chunks = chunks;
    opt.precision = prec;
    opt.cap = cfg.tuple_cap;
    SumResult r;
    if (label == "mu") {
        r = sum_mu(t, T, opt);
    } else {
        DomainSpec spec;
        spec.triple = t;
        spec.T = T;
        spec.convention = convention_from_word(label);
        r = sum_s(spec, opt);
    }
    const CacheEntry entry{r.value, r.term_count};
    cache.store(key, entry);
    return entry;
}

// ---- subcommands ------------------------------------------------------------

void run_constants(const TripleFlags& tf) {
    const ExponentTriple t = tf.resolve();
    const DerivedConstants dc = derive_constants(t);
    const ValidationReport vr = validate_triple(t);

    ojson j = result_header("constants");
    j["params"] = triple_params(t);
    j["grade"] = vr.grade == TripleGrade::theorem ? "theorem" : "basic";
    j["xi"] = dc.xi;
    j["i_a"] = dc.i_a;
    j["q_a"] = dc.q_a;
    j["eta"] = dc.eta;
    j["kappa"] = dc.kappa;
    j["lambda"] = dc.lambda;
    j["alpha"] = dc.alpha;
    j["c_alpha"] = dc.c_alpha;
    if (vr.grade == TripleGrade::theorem) {
        const ExponentTable et = exponent_table(t);
        ojson e;
        e["theorem_e1"] = et.theorem_e1;
        e["theorem_e2"] = et.theorem_e2;
        e["vdc_e"] = et.vdc_e;
        e["ep_e"] = et.ep_e;
        e["winner"] = et.winner;
        e["in_range13"] = et.in_range13;
        j["exponents"] = e;
    }
    emit(j);
}

void run_enumerate(const TripleFlags& tf, const CommonFlags& cf, double T,
                   const std::string& convention, const std::string& out) {
    const RunConfig cfg = cf.resolve();
    DomainSpec spec;
    spec.triple = tf.resolve();
    spec.T = T;
    spec.convention = convention_from_word(convention);
    const EnumerationResult e = enumerate_domain(spec, cfg.tuple_cap);
    write_csv(out, [&](std::ostream& os) { write_domain_csv(os, spec, e); });
}

void run_sum(const TripleFlags& tf, const CommonFlags& cf, double T,
             const std::string& label, unsigned chunks,
             const std::string& precision_word_flag) {
    const RunConfig cfg = cf.resolve();
    const ExponentTriple t = tf.resolve();
    const PhasePrecision prec = resolve_precision(precision_word_flag, cfg, T);
    const CacheEntry entry = cached_sum(t, T, label, chunks, prec, cfg);

    ojson j = result_header(label == "mu" ? "mu-sum" : "sum");
    ojson p = triple_params(t);
    p["T"] = T;
    if (label == "mu") {
        p["window"] = "mu";
    } else {
        p["convention"] = label;
    }
    p["chunks"] = chunks;
    p["precision"] = precision_word(prec);
    p["tuple_cap"] = cfg.tuple_cap;
    p["cache_dir"] = cfg.cache_dir.generic_string();
    j["params"] = p;
    j["value_re"] = entry.value.real();
    j["value_im"] = entry.value.imag();
    j["abs"] = std::abs(entry.value);
    j["term_count"] = entry.term_count;
    emit(j);
}

void run_fit(const TripleFlags& tf, const CommonFlags& cf, double t_min,
             double t_max, unsigned points, unsigned chunks,
             const std::string& precision_word_flag) {
    const RunConfig cfg = cf.resolve();
    const ExponentTriple t = tf.resolve();
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw parameter_error("fit needs 0 < Tmin < Tmax");
    if (points < 3) throw parameter_error("fit needs at least 3 points");

    std::vector<std::pair<double, double>> samples;
    ojson rows = ojson::array();
    for (unsigned i = 0; i < points; ++i) {
        const double T =
            t_min * std::pow(t_max / t_min, double(i) / double(points - 1));
        const PhasePrecision prec = resolve_precision(precision_word_flag, cfg, T);
        const CacheEntry entry = cached_sum(t, T, "paper", chunks, prec, cfg);
        samples.emplace_back(T, std::abs(entry.value));
        ojson r;
        r["T"] = T;
        r["abs"] = std::abs(entry.value);
        r["term_count"] = entry.term_count;
        r["precision"] = precision_word(prec);
        rows.push_back(std::move(r));
    }
    const GrowthFit fit = fit_growth(samples);

    ojson j = result_header("fit");
    ojson p = triple_params(t);
    p["Tmin"] = t_min;
    p["Tmax"] = t_max;
    p["points"] = points;
    p["convention"] = "paper";
    p["chunks"] = chunks;
    p["tuple_cap"] = cfg.tuple_cap;
    p["cache_dir"] = cfg.cache_dir.generic_string();
    j["params"] = p;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    j["used"] = fit.used;
    j["dropped"] = fit.dropped;
    j["rows"] = rows;
    emit(j);
}

std::vector<double> parse_t_grid(const std::string& spec) {
    std::vector<double> grid;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string w = trim(item);
        if (w.empty()) continue;
        try {
            std::size_t pos = 0;
            grid.push_back(std::stod(w, &pos));
            if (pos != w.size()) throw std::invalid_argument(w);
        } catch (const std::exception&) {
            throw parameter_error("t-grid entry is not a number: '" + w + "'");
        }
    }
    if (grid.empty()) throw parameter_error("t-grid must list at least one t");
    return grid;
}

void run_afe_check(const TripleFlags& tf, const std::string& t_grid,
                   double margin, const std::string& out) {
    const AdmissibleTuple tuple = tuple_from_triple(tf.resolve());
    const AfeValidation v = afe_validate(tuple, parse_t_grid(t_grid), margin);
    write_csv(out, [&](std::ostream& os) { write_afe_csv(os, v); });
}

void run_sp_check(const TripleFlags& tf, std::uint64_t n1, std::uint64_t n2,
                  std::uint64_t n3, double f) {
    const ExponentTriple t = tf.resolve();
    const PhaseContext ctx = make_phase_context(t, Tuple3{n1, n2, n3});
    const SpComparison cmp = sp_compare(ctx, f);

    ojson j = result_header("sp-check");
    ojson p = triple_params(t);
    p["n1"] = n1;
    p["n2"] = n2;
    p["n3"] = n3;
    p["f"] = f;
    j["params"] = p;
    j["quadrature_re"] = cmp.quadrature.real();
    j["quadrature_im"] = cmp.quadrature.imag();
    j["prediction_re"] = cmp.prediction.real();
    j["prediction_im"] = cmp.prediction.imag();
    j["abs_err"] = cmp.abs_err;
    j["rel_err"] = cmp.rel_err;
    emit(j);
}

void run_moment(const TripleFlags& tf, const CommonFlags& cf, double T,
                double tol_flag) {
    const RunConfig cfg = cf.resolve();
    const ExponentTriple t = tf.resolve();
    QuadratureSpec quad;
    quad.abs_tol = tol_flag > 0.0 ? tol_flag : cfg.quad_tol;
    const ResidualReport rep = assemble_residual(t, T, quad);

    ojson j = result_header("moment");
    ojson p = triple_params(t);
    p["T"] = T;
    p["tol"] = quad.abs_tol;
    j["params"] = p;
    j["T"] = rep.T;
    j["I_re"] = rep.integral.real();
    j["I_im"] = rep.integral.imag();
    j["sigma"] = rep.sigma;
    j["M1_re"] = rep.m1.real();
    j["M1_im"] = rep.m1.imag();
    j["J22_re"] = rep.j22.real();
    j["J22_im"] = rep.j22.imag();
    j["residual_abs"] = rep.residual_abs;
    j["envelope"] = rep.envelope;
    emit(j);
}

void run_sigma(const std::string& num, std::int64_t den, std::uint64_t p_max) {
    std::int64_t pa = 0, pb = 0, pc = 0;
    char extra = '\0';
    if (std::sscanf(num.c_str(), "%ld,%ld,%ld%c", &pa, &pb, &pc, &extra) != 3)
        throw parameter_error("--num must be three integers 'pa,pb,pc'");
    const RationalTriple rt{pa, pb, pc, den};
    const SigmaSeries s = sigma_series(rt, p_max);

    ojson j = result_header("sigma");
    ojson p;
    p["num"] = ojson::array({pa, pb, pc});
    p["den"] = den;
    p["pmax"] = p_max;
    j["params"] = p;
    j["value"] = s.value;
    j["tail_bound"] = s.tail_bound;
    j["solution_count"] = s.solution_count;
    emit(j);
}

void run_bounds_map(unsigned grid_n, const std::string& out) {
    const std::vector<GridRow> rows = winner_grid(grid_n);
    write_csv(out, [&](std::ostream& os) { write_grid_csv(os, rows); });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-factor exponential sum toolkit"};
    app.require_subcommand(1);

    // constants
    TripleFlags constants_t;
    auto* constants_cmd =
        app.add_subcommand("constants", "derived constants and bound exponents");
    constants_t.attach(constants_cmd);
    constants_cmd->callback([&] { run_constants(constants_t); });

    // enumerate
    TripleFlags enum_t;
    CommonFlags enum_cf;
    double enum_T = 0.0;
    std::string enum_conv, enum_out;
    auto* enum_cmd =
        app.add_subcommand("enumerate", "list the lattice domain as CSV");
    enum_t.attach(enum_cmd);
    enum_cmd->add_option("--T", enum_T, "size parameter T")->required();
    enum_cmd->add_option("--convention", enum_conv, "domain convention")
        ->required()
        ->check(CLI::IsMember({"paper", "window"}));
    enum_cmd->add_option("--out", enum_out, "write CSV here instead of stdout");
    enum_cf.attach(enum_cmd, true);
    enum_cmd->callback(
        [&] { run_enumerate(enum_t, enum_cf, enum_T, enum_conv, enum_out); });

    // sum
    TripleFlags sum_t;
    CommonFlags sum_cf;
    double sum_T = 0.0;
    std::string sum_conv = "paper", sum_prec;
    unsigned sum_chunks = 1;
    auto* sum_cmd = app.add_subcommand("sum", "weighted exponential sum S(T)");
    sum_t.attach(sum_cmd);
    sum_cmd->add_option("--T", sum_T, "size parameter T")->required();
    sum_cmd->add_option("--convention", sum_conv, "domain convention")
        ->check(CLI::IsMember({"paper", "window"}));
    sum_cmd->add_option("--chunks", sum_chunks, "worker chunk count")
        ->check(CLI::Range(1u, 1024u));
    sum_cmd->add_option("--precision", sum_prec, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    sum_cf.attach(sum_cmd, true);
    sum_cmd->callback(
        [&] { run_sum(sum_t, sum_cf, sum_T, sum_conv, sum_chunks, sum_prec); });

    // mu-sum
    TripleFlags mu_t;
    CommonFlags mu_cf;
    double mu_T = 0.0;
    unsigned mu_chunks = 1;
    auto* mu_cmd =
        app.add_subcommand("mu-sum", "saddle-height sum over the window");
    mu_t.attach(mu_cmd);
    mu_cmd->add_option("--T", mu_T, "window top T")->required();
    mu_cmd->add_option("--chunks", mu_chunks, "worker chunk count")
        ->check(CLI::Range(1u, 1024u));
    mu_cf.attach(mu_cmd, true);
    mu_cmd->callback([&] { run_sum(mu_t, mu_cf, mu_T, "mu", mu_chunks, ""); });

    // fit
    TripleFlags fit_t;
    CommonFlags fit_cf;
    double fit_tmin = 0.0, fit_tmax = 0.0;
    unsigned fit_points = 0, fit_chunks = 8;
    std::string fit_prec;
    auto* fit_cmd =
        app.add_subcommand("fit", "growth exponent of |S(T)| on a log grid");
    fit_t.attach(fit_cmd);
    fit_cmd->add_option("--Tmin", fit_tmin, "smallest T")->required();
    fit_cmd->add_option("--Tmax", fit_tmax, "largest T")->required();
    fit_cmd->add_option("--points", fit_points, "number of log-spaced T")
        ->required();
    fit_cmd->add_option("--chunks", fit_chunks, "worker chunk count")
        ->check(CLI::Range(1u, 1024u));
    fit_cmd->add_option("--precision", fit_prec, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    fit_cf.attach(fit_cmd, true);
    fit_cmd->callback([&] {
        run_fit(fit_t, fit_cf, fit_tmin, fit_tmax, fit_points, fit_chunks,
                fit_prec);
    });

    // afe-check
    TripleFlags afe_t;
    std::string afe_grid, afe_out;
    double afe_margin = 2.0;
    auto* afe_cmd = app.add_subcommand(
        "afe-check", "two-sided expansion versus the direct product");
    afe_t.attach(afe_cmd);
    afe_cmd->add_option("--t-grid", afe_grid, "comma-separated t values")
        ->required();
    afe_cmd->add_option("--margin", afe_margin, "cutoff margin (>= 1)");
    afe_cmd->add_option("--out", afe_out, "write CSV here instead of stdout");
    afe_cmd->callback([&] { run_afe_check(afe_t, afe_grid, afe_margin, afe_out); });

    // sp-check
    TripleFlags sp_t;
    std::uint64_t sp_n1 = 0, sp_n2 = 0, sp_n3 = 0;
    double sp_f = 2.0;
    auto* sp_cmd = app.add_subcommand(
        "sp-check", "saddle-point prediction versus quadrature");
    sp_t.attach(sp_cmd);
    sp_cmd->add_option("--n1", sp_n1, "first coordinate")->required();
    sp_cmd->add_option("--n2", sp_n2, "second coordinate")->required();
    sp_cmd->add_option("--n3", sp_n3, "third coordinate")->required();
    sp_cmd->add_option("--f", sp_f, "window factor (> 1)");
    sp_cmd->callback([&] { run_sp_check(sp_t, sp_n1, sp_n2, sp_n3, sp_f); });

    // moment
    TripleFlags mom_t;
    CommonFlags mom_cf;
    double mom_T = 0.0, mom_tol = 0.0;
    auto* mom_cmd = app.add_subcommand(
        "moment", "moment integral against its main terms");
    mom_t.attach(mom_cmd);
    mom_cmd->add_option("--T", mom_T, "upper endpoint T")->required();
    mom_cmd->add_option("--tol", mom_tol, "quadrature tolerance");
    mom_cf.attach(mom_cmd, false);
    mom_cmd->callback([&] { run_moment(mom_t, mom_cf, mom_T, mom_tol); });

    // sigma
    std::string sig_num;
    std::int64_t sig_den = 0;
    std::uint64_t sig_pmax = 0;
    auto* sig_cmd =
        app.add_subcommand("sigma", "diagonal constant partial series");
    sig_cmd->add_option("--num", sig_num, "exponent numerators 'pa,pb,pc'")
        ->required();
    sig_cmd->add_option("--den", sig_den, "common denominator")->required();
    sig_cmd->add_option("--pmax", sig_pmax, "series cutoff")->required();
    sig_cmd->callback([&] { run_sigma(sig_num, sig_den, sig_pmax); });

    // bounds-map
    unsigned map_grid = 0;
    std::string map_out;
    auto* map_cmd =
        app.add_subcommand("bounds-map", "winner map over the (a, c) wedge");
    map_cmd->add_option("--grid", map_grid, "grid resolution per axis")
        ->required();
    map_cmd->add_option("--out", map_out, "write CSV here instead of stdout");
    map_cmd->callback([&] { run_bounds_map(map_grid, map_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    } catch (const parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const accuracy_error& e) {
        std::cerr << "accuracy error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
