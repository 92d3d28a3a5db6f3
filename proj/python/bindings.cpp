#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtpz/distributions.hpp"
#include "rtpz/edgeworth.hpp"
#include "rtpz/gaussian_reference.hpp"
#include "rtpz/harness.hpp"
#include "rtpz/serialize.hpp"
#include "rtpz/smallball.hpp"
#include "rtpz/trigpoly.hpp"

namespace py = pybind11;
using namespace rtpz;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

poly::EvalMode mode_from_string(const std::string& s) {
    if (s == "raw") return poly::EvalMode::Raw;
    if (s == "normalized") return poly::EvalMode::Normalized;
    if (s == "rescaled") return poly::EvalMode::Rescaled;
    throw std::invalid_argument("unknown mode \"" + s + "\" (raw | normalized | rescaled)");
}

poly::PhasePolicy phases_from_string(const std::string& s, std::uint64_t seed) {
    if (s == "zero") return poly::PhasePolicy::zero();
    if (s == "uniform") return poly::PhasePolicy::uniform_random(seed);
    throw std::invalid_argument("unknown phase policy \"" + s + "\" (zero | uniform)");
}

} // namespace

PYBIND11_MODULE(_rtpz, m) {
    m.doc() = "Certified zero counting and distribution experiments for random "
              "trigonometric polynomials";
    m.attr("__version__") = harness::kVersion;
    m.attr("UNIVERSAL_ZERO_DENSITY") = gauss::kUniversalZeroDensity;

    py::class_<dist::CoefficientLaw>(m, "CoefficientLaw",
                                     "Distribution of one random coefficient")
        .def_static("from_spec", &serialize::law_from_spec, py::arg("spec"),
                    "Parse a law from shorthand (\"gaussian\", \"rademacher\", "
                    "\"sqrt-primes\", \"uniform\", \"cos-atoms:P\", \"blocked-cosine:P\", "
                    "\"sqrt-poisson:L\"), inline JSON, or \"@file\"")
        .def("mean", &dist::CoefficientLaw::mean)
        .def("variance", &dist::CoefficientLaw::variance)
        .def("abs_char_fn", &dist::CoefficientLaw::abs_char_fn, py::arg("t"),
             "|E exp(itX)| at the given frequency")
        .def("standardized", &dist::CoefficientLaw::standardized)
        .def("is_standardized", &dist::CoefficientLaw::is_standardized, py::arg("tol") = 1e-9)
        .def("describe", &dist::CoefficientLaw::describe)
        .def(
            "sample",
            [](const dist::CoefficientLaw& law, std::uint64_t seed, std::size_t count) {
                RngStream stream(seed);
                return law.sample(stream, count);
            },
            py::arg("seed"), py::arg("count"), "Deterministic draws from a counter-based stream")
        .def("to_json",
             [](const dist::CoefficientLaw& law) { return serialize::law_to_json(law).dump(); })
        .def("__repr__", [](const dist::CoefficientLaw& law) {
            return "CoefficientLaw(" + law.describe() + ")";
        });

    py::class_<poly::TrigPolynomial>(m, "TrigPolynomial",
                                     "sum_k a_k cos(kt + th_k) + b_k sin(kt + th_k)")
        .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>>(),
             py::arg("a"), py::arg("b"), py::arg("theta") = std::vector<double>{})
        .def_property_readonly("degree", &poly::TrigPolynomial::degree)
        .def_property_readonly("a", &poly::TrigPolynomial::coeff_a)
        .def_property_readonly("b", &poly::TrigPolynomial::coeff_b)
        .def_property_readonly("theta", &poly::TrigPolynomial::phases)
        .def(
            "eval",
            [](const poly::TrigPolynomial& p, double t, int deriv, const std::string& mode) {
                return p.eval(t, deriv, mode_from_string(mode));
            },
            py::arg("t"), py::arg("deriv") = 0, py::arg("mode") = "normalized")
        .def(
            "sup_bound",
            [](const poly::TrigPolynomial& p, int deriv, const std::string& mode) {
                return p.sup_bound(deriv, mode_from_string(mode));
            },
            py::arg("deriv") = 0, py::arg("mode") = "normalized",
            "Certified coefficient-sum bound on sup |f^(deriv)|")
        .def("to_json",
             [](const poly::TrigPolynomial& p) { return serialize::poly_to_json(p).dump(); })
        .def("__repr__", [](const poly::TrigPolynomial& p) {
            return "TrigPolynomial(degree=" + std::to_string(p.degree()) + ")";
        });

    m.def(
        "sample_polynomial",
        [](const dist::CoefficientLaw& law, int n, std::uint64_t seed, const std::string& phases) {
            RngStream stream(seed);
            return poly::sample_polynomial(law, n, phases_from_string(phases, seed), stream);
        },
        py::arg("law"), py::arg("n"), py::arg("seed") = 1, py::arg("phases") = "zero",
        "Draw the 2n coefficients of one random polynomial (law must be standardized)");

    m.def(
        "count_zeros",
        [](const poly::TrigPolynomial& p, double lo, double hi, double r) {
            const harness::TrialCount tc = harness::count_zeros_certified(p, lo, hi, r);
            py::dict d;
            d["count"] = tc.count;
            d["certified"] = tc.certified;
            d["omega_lower"] = tc.omega_lower;
            d["delta"] = tc.delta;
            return d;
        },
        py::arg("p"), py::arg("lo") = 0.0, py::arg("hi") = kTwoPi, py::arg("r") = 1.3,
        "Certified zero count of U_n over [n lo, n hi]: adaptive threshold "
        "certificate, Kac-Rice structural count, sign-change cross-check");

    m.def("expected_zeros", &gauss::exact_expected_zeros, py::arg("n"), py::arg("a") = 0.0,
          py::arg("b") = kTwoPi,
          "Closed-form Gaussian expectation (b - a)/pi * sqrt((n+1)(2n+1)/6)");
    m.def("spectral_sigma", [](int n) { return gauss::spectral_moments(n).sigma; }, py::arg("n"),
          "Standard deviation of U_n' under the Gaussian law");
    m.def("gaussian_kac_functional", &gauss::gaussian_kac_functional, py::arg("n"),
          py::arg("r") = 1.3,
          "(n^r / 2) E[|U'| 1{|U| <= n^-r}] for the Gaussian law; tends to 1/(pi sqrt 3)");
    m.def("gaussian_small_ball", &gauss::gaussian_small_ball, py::arg("sigma"), py::arg("delta"),
          "P(X^2 + Y^2 <= delta^2) for X ~ N(0,1), Y ~ N(0,sigma^2)");

    m.def(
        "small_ball",
        [](const dist::CoefficientLaw& law, long n, double t, double gamma, long trials,
           std::uint64_t seed) {
            const smallball::SmallBallEstimate est =
                smallball::small_ball_mc(law, n, t, gamma, trials, RngStream(seed));
            py::dict d;
            d["estimate"] = est.estimate;
            d["std_error"] = est.std_error;
            d["hits"] = est.hits;
            d["radius"] = est.radius;
            d["upper95"] = est.upper95;
            return d;
        },
        py::arg("law"), py::arg("n"), py::arg("t") = 1.0, py::arg("gamma") = 0.6,
        py::arg("trials") = 100000, py::arg("seed") = 1,
        "Monte Carlo P(|(U_n(t), U_n'(t))| <= n^-gamma)");

    m.def(
        "edgeworth_cdf",
        [](const dist::CoefficientLaw& law, long n, int s, double x) {
            const edgeworth::CumulantTable table = edgeworth::average_cumulants({law}, 5);
            return edgeworth::edgeworth_cdf_1d(table, n, s, x);
        },
        py::arg("law"), py::arg("n"), py::arg("s"), py::arg("x"),
        "Order s-2 Edgeworth CDF of the normalized n-fold sum of the law");

    m.def(
        "run_experiment",
        [](const std::string& config, std::uint64_t seed, int workers) {
            const harness::ExperimentConfig cfg =
                harness::config_from_json(json::parse(config), seed, workers);
            return harness::report_to_json(harness::run_experiment(cfg)).dump();
        },
        py::arg("config"), py::arg("seed") = 1, py::arg("workers") = 1,
        "Run one experiment from a JSON config string; returns the JSON report");

    m.def(
        "run_suite",
        [](const std::string& config, const std::string& out_dir) {
            const harness::SuiteResult res = harness::run_suite(json::parse(config), out_dir);
            py::dict d;
            d["csv_paths"] = res.csv_paths;
            d["flagged"] = res.flagged;
            d["experiments"] = res.reports.size();
            return d;
        },
        py::arg("config"), py::arg("out_dir"),
        "Run a {seed, workers, experiments: [...]} suite, writing CSV and report.json");
}
