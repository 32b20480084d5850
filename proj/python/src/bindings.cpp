#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trisum/afe.hpp"
#include "trisum/bounds.hpp"
#include "trisum/common.hpp"
#include "trisum/expsum.hpp"
#include "trisum/lattice.hpp"
#include "trisum/moment.hpp"
#include "trisum/params.hpp"
#include "trisum/phase.hpp"
#include "trisum/zeta.hpp"

namespace py = pybind11;
using namespace trisum;

namespace {

ExponentTriple triple_of(double a, double c) { return triple_from_ac(a, c); }

DomainConvention convention_of(const std::string& w) {
    if (w == "paper") return DomainConvention::paper;
    if (w == "window") return DomainConvention::window;
    throw parameter_error("convention must be paper or window");
}

PhasePrecision precision_of(const std::optional<std::string>& w, double T) {
    if (!w) return T > 1e4 ? PhasePrecision::extended : PhasePrecision::dbl;
    if (*w == "double") return PhasePrecision::dbl;
    if (*w == "extended") return PhasePrecision::extended;
    throw parameter_error("precision must be double or extended");
}

py::dict sum_result_dict(const SumResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["term_count"] = r.term_count;
    d["chunks"] = r.chunks;
    d["precision"] =
        r.precision == PhasePrecision::extended ? "extended" : "double";
    d["max_phase"] = r.max_phase;
    d["near_boundary"] = r.near_boundary;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "three-factor exponential sum toolkit";
    m.attr("engine_version") = kEngineVersion;

    py::register_exception<parameter_error>(m, "ParameterError",
                                            PyExc_ValueError);
    py::register_exception<accuracy_error>(m, "AccuracyError",
                                           PyExc_ArithmeticError);
    py::register_exception<resource_error>(m, "ResourceError",
                                           PyExc_RuntimeError);

    m.def(
        "constants",
        [](double a, double c) {
            const ExponentTriple t = triple_of(a, c);
            const DerivedConstants dc = derive_constants(t);
            py::dict d;
            d["a"] = t.a;
            d["b"] = t.b;
            d["c"] = t.c;
            d["xi"] = dc.xi;
            d["i_a"] = dc.i_a;
            d["q_a"] = dc.q_a;
            d["eta"] = dc.eta;
            d["kappa"] = dc.kappa;
            d["lambda"] = dc.lambda;
            d["alpha"] = dc.alpha;
            d["c_alpha"] = dc.c_alpha;
            return d;
        },
        py::arg("a"), py::arg("c"),
        "derived constants for the triple (a, 1 + a - c, c)");

    m.def(
        "exponents",
        [](double a, double c) {
            const ExponentTable et = exponent_table(triple_of(a, c));
            py::dict d;
            d["theorem_e1"] = et.theorem_e1;
            d["theorem_e2"] = et.theorem_e2;
            d["vdc_e"] = et.vdc_e;
            d["ep_e"] = et.ep_e;
            d["winner"] = et.winner;
            d["in_range13"] = et.in_range13;
            return d;
        },
        py::arg("a"), py::arg("c"), "competing growth-bound exponents");

    m.def(
        "validate",
        [](double a, double c) {
            const ValidationReport r = validate_triple(triple_of(a, c));
            py::dict d;
            d["grade"] = r.grade == TripleGrade::theorem ? "theorem"
                         : r.grade == TripleGrade::basic ? "basic"
                                                         : "invalid";
            d["reasons"] = r.reasons;
            return d;
        },
        py::arg("a"), py::arg("c"), "triple validation grade and reasons");

    m.def(
        "enumerate_count",
        [](double a, double c, double T, const std::string& convention,
           std::uint64_t cap) {
            DomainSpec spec;
            spec.triple = triple_of(a, c);
            spec.T = T;
            spec.convention = convention_of(convention);
            return count_domain(spec, cap);
        },
        py::arg("a"), py::arg("c"), py::arg("T"),
        py::arg("convention") = "paper", py::arg("cap") = kDefaultTupleCap,
        "number of lattice tuples in the domain");

    m.def(
        "enumerate_domain",
        [](double a, double c, double T, const std::string& convention,
           std::uint64_t cap) {
            DomainSpec spec;
            spec.triple = triple_of(a, c);
            spec.T = T;
            spec.convention = convention_of(convention);
            const EnumerationResult e = enumerate_domain(spec, cap);
            std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>
                out;
            out.reserve(e.tuples.size());
            for (const Tuple3& n : e.tuples) out.emplace_back(n.n1, n.n2, n.n3);
            return out;
        },
        py::arg("a"), py::arg("c"), py::arg("T"),
        py::arg("convention") = "paper", py::arg("cap") = kDefaultTupleCap,
        "lattice tuples in lexicographic order");

    m.def(
        "sum_s",
        [](double a, double c, double T, const std::string& convention,
           unsigned chunks, std::optional<std::string> precision,
           std::uint64_t cap) {
            DomainSpec spec;
            spec.triple = triple_of(a, c);
            spec.T = T;
            spec.convention = convention_of(convention);
            SumOptions opt;
            opt.chunks = chunks;
            opt.precision = precision_of(precision, T);
            opt.cap = cap;
            return sum_result_dict(sum_s(spec, opt));
        },
        py::arg("a"), py::arg("c"), py::arg("T"),
        py::arg("convention") = "paper", py::arg("chunks") = 1,
        py::arg("precision") = std::nullopt,
        py::arg("cap") = kDefaultTupleCap, "weighted exponential sum S(T)");

    m.def(
        "sum_mu",
        [](double a, double c, double T, unsigned chunks, std::uint64_t cap) {
            SumOptions opt;
            opt.chunks = chunks;
            opt.precision = precision_of(std::nullopt, T);
            opt.cap = cap;
            return sum_result_dict(sum_mu(triple_of(a, c), T, opt));
        },
        py::arg("a"), py::arg("c"), py::arg("T"), py::arg("chunks") = 1,
        py::arg("cap") = kDefaultTupleCap,
        "saddle-height sum over the window tau <= c_n <= T");

    m.def(
        "fit_growth",
        [](const std::vector<std::pair<double, double>>& samples) {
            const GrowthFit f = fit_growth(samples);
            py::dict d;
            d["exponent"] = f.exponent;
            d["intercept"] = f.intercept;
            d["r2"] = f.r2;
            d["used"] = f.used;
            d["dropped"] = f.dropped;
            return d;
        },
        py::arg("samples"),
        "least-squares slope of log magnitude against log T");

    m.def(
        "zeta",
        [](double t, double tol) { return zeta_critical(t, tol).value; },
        py::arg("t"), py::arg("tol") = 1e-13, "zeta(1/2 + it)");

    m.def(
        "zeta_product",
        [](double a, double c, double t) {
            return direct_product(tuple_from_triple(triple_of(a, c)), t);
        },
        py::arg("a"), py::arg("c"), py::arg("t"),
        "zeta(1/2 + i a t) zeta(1/2 - i b t) zeta(1/2 - i c t)");

    m.def(
        "afe_sum",
        [](double a, double c, double t, double margin) {
            const AfeResult r =
                afe_sum(tuple_from_triple(triple_of(a, c)), t, margin);
            py::dict d;
            d["value"] = r.value;
            d["est_error"] = r.est_error;
            d["term_count"] = r.term_count;
            return d;
        },
        py::arg("a"), py::arg("c"), py::arg("t"), py::arg("margin") = 2.0,
        "two-sided expansion of the zeta product");

    m.def(
        "afe_check",
        [](double a, double c, const std::vector<double>& t_grid,
           double margin) {
            const AfeValidation v =
                afe_validate(tuple_from_triple(triple_of(a, c)), t_grid, margin);
            py::list rows;
            for (const AfeRow& r : v.rows) {
                py::dict d;
                d["t"] = r.t;
                d["direct"] = r.direct;
                d["afe"] = r.afe;
                d["abs_err"] = r.abs_err;
                d["rel_err"] = r.rel_err;
                rows.append(std::move(d));
            }
            py::dict out;
            out["rows"] = rows;
            out["monotone_rel_err"] = v.monotone_rel_err;
            return out;
        },
        py::arg("a"), py::arg("c"), py::arg("t_grid"), py::arg("margin") = 2.0,
        "expansion error against the direct product along a t grid");

    m.def(
        "sp_compare",
        [](double a, double c, std::uint64_t n1, std::uint64_t n2,
           std::uint64_t n3, double f) {
            const PhaseContext ctx =
                make_phase_context(triple_of(a, c), Tuple3{n1, n2, n3});
            const SpComparison r = sp_compare(ctx, f);
            py::dict d;
            d["quadrature"] = r.quadrature;
            d["prediction"] = r.prediction;
            d["abs_err"] = r.abs_err;
            d["rel_err"] = r.rel_err;
            return d;
        },
        py::arg("a"), py::arg("c"), py::arg("n1"), py::arg("n2"),
        py::arg("n3"), py::arg("f") = 2.0,
        "saddle-point prediction against windowed quadrature");

    m.def(
        "moment_report",
        [](double a, double c, double T, double tol) {
            QuadratureSpec quad;
            quad.abs_tol = tol;
            const ResidualReport r = assemble_residual(triple_of(a, c), T, quad);
            py::dict d;
            d["T"] = r.T;
            d["integral"] = r.integral;
            d["sigma"] = r.sigma;
            d["m1"] = r.m1;
            d["j22"] = r.j22;
            d["residual_abs"] = r.residual_abs;
            d["envelope"] = r.envelope;
            return d;
        },
        py::arg("a"), py::arg("c"), py::arg("T"), py::arg("tol") = 1e-6,
        "moment integral against its assembled main terms");

    m.def(
        "sigma_series",
        [](std::int64_t pa, std::int64_t pb, std::int64_t pc, std::int64_t q,
           std::uint64_t p_max) {
            const SigmaSeries s = sigma_series(RationalTriple{pa, pb, pc, q},
                                               p_max);
            py::dict d;
            d["value"] = s.value;
            d["tail_bound"] = s.tail_bound;
            d["solution_count"] = s.solution_count;
            return d;
        },
        py::arg("pa"), py::arg("pb"), py::arg("pc"), py::arg("q"),
        py::arg("pmax"), "diagonal constant partial series with tail bound");

    m.def(
        "winner_grid",
        [](unsigned n) {
            py::list rows;
            for (const GridRow& r : winner_grid(n)) {
                py::dict d;
                d["a"] = r.a;
                d["c"] = r.c;
                d["b"] = r.b;
                d["theorem_e1"] = r.table.theorem_e1;
                d["theorem_e2"] = r.table.theorem_e2;
                d["vdc_e"] = r.table.vdc_e;
                d["ep_e"] = r.table.ep_e;
                d["winner"] = r.table.winner;
                d["in_range13"] = r.table.in_range13;
                rows.append(std::move(d));
            }
            return rows;
        },
        py::arg("n"), "winner map over the valid (a, c) wedge");

    m.def(
        "appendix_inequalities",
        [](double a, double c) {
            py::list rows;
            for (const InequalityCheck& r :
                 appendix_inequalities(triple_of(a, c))) {
                py::dict d;
                d["name"] = r.name;
                d["lhs"] = r.lhs;
                d["rhs"] = r.rhs;
                d["holds"] = r.holds;
                d["applicable"] = r.applicable;
                rows.append(std::move(d));
            }
            return rows;
        },
        py::arg("a"), py::arg("c"),
        "structural inequalities behind the bound comparison");
}
