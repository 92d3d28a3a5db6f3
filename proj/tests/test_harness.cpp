#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtpz/gaussian_reference.hpp"
#include "rtpz/harness.hpp"
#include "rtpz/serialize.hpp"
#include "rtpz/zeros.hpp"

using namespace rtpz;
using namespace rtpz::harness;
using nlohmann::json;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

long line_count(const std::string& s) {
    long c = 0;
    for (const char ch : s)
        if (ch == '\n') ++c;
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig quick_universality() {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Universality;
    cfg.n_list = {10, 20};
    cfg.trials = 60;
    cfg.seed = 7;
    return cfg;
}

} // namespace

TEST_CASE("experiment kinds have stable names") {
    CHECK(kind_name(ExperimentKind::Universality) == "universality");
    CHECK(kind_name(ExperimentKind::Threshold) == "threshold");
    CHECK(kind_name(ExperimentKind::SmallBall) == "small-ball");
    CHECK(kind_name(ExperimentKind::Cramer) == "cramer");
    CHECK(kind_name(ExperimentKind::Edgeworth) == "edgeworth");
}

TEST_CASE("fnv1a matches the published test vectors") {
    CHECK(fnv1a("") == 14695981039346656037ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(config_hash_hex(json{{"seed", 1}}).size() == 16);
    CHECK(config_hash_hex(json{{"seed", 1}}) == config_hash_hex(json{{"seed", 1}}));
    CHECK(config_hash_hex(json{{"seed", 1}}) != config_hash_hex(json{{"seed", 2}}));
}

TEST_CASE("config parsing fills defaults and accepts overrides") {
    const ExperimentConfig minimal = config_from_json(json{{"kind", "universality"}}, 17, 4);
    CHECK(minimal.kind == ExperimentKind::Universality);
    CHECK(minimal.seed == 17);
    CHECK(minimal.workers == 4);
    CHECK(minimal.trials == 100);
    CHECK(minimal.n_list == std::vector<long>{50});
    CHECK(minimal.r == doctest::Approx(1.3));
    CHECK(minimal.lo == doctest::Approx(0.0));
    CHECK(minimal.hi == doctest::Approx(kTwoPi));
    CHECK(minimal.law.describe() == "gaussian(0,1)");
    CHECK(minimal.phases.kind == poly::PhasePolicy::Kind::Zero);

    const json full = {{"kind", "threshold"},
                       {"law", "rademacher"},
                       {"n", {10, 20}},
                       {"interval", {1.0, 2.0}},
                       {"trials", 5},
                       {"seed", 99},
                       {"r", 1.25},
                       {"theta", -1.1},
                       {"gamma", 0.7},
                       {"t", 2.0},
                       {"s", 4},
                       {"workers", 3},
                       {"phases", "uniform"}};
    const ExperimentConfig cfg = config_from_json(full, 17, 4);
    CHECK(cfg.kind == ExperimentKind::Threshold);
    CHECK(cfg.n_list == std::vector<long>{10, 20});
    CHECK(cfg.lo == doctest::Approx(1.0));
    CHECK(cfg.hi == doctest::Approx(2.0));
    CHECK(cfg.trials == 5);
    CHECK(cfg.seed == 99);
    CHECK(cfg.r == doctest::Approx(1.25));
    CHECK(cfg.theta == doctest::Approx(-1.1));
    CHECK(cfg.gamma == doctest::Approx(0.7));
    CHECK(cfg.t_point == doctest::Approx(2.0));
    CHECK(cfg.s == 4);
    CHECK(cfg.workers == 3);
    CHECK(cfg.phases.kind == poly::PhasePolicy::Kind::UniformRandom);

    // scalar n becomes a one-element list
    const ExperimentConfig single =
        config_from_json(json{{"kind", "universality"}, {"n", 30}}, 1, 1);
    CHECK(single.n_list == std::vector<long>{30});

    // structured law and phase objects
    const json structured = {{"kind", "universality"},
                             {"law", {{"kind", "uniform"}, {"params", {{"lo", -1.0}, {"hi", 1.0}}}}},
                             {"phases", {{"kind", "constant"}, {"value", 1.5}}}};
    const ExperimentConfig sc = config_from_json(structured, 1, 1);
    CHECK(sc.law.kind() == dist::LawKind::UniformInterval);
    CHECK(sc.phases.kind == poly::PhasePolicy::Kind::Constant);
    CHECK(sc.phases.constant == doctest::Approx(1.5));
}

TEST_CASE("config parsing rejects invalid input") {
    auto parse = [](const json& j) { return config_from_json(j, 1, 1); };
    CHECK_THROWS_AS(parse(json{{"kind", "bogus"}}), std::invalid_argument);
    CHECK_THROWS(parse(json::object()));
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"trials", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"interval", {2.0, 1.0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"r", 1.2}}), std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"r", 1.5}}), std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"n", json::array()}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"n", {0}}}), std::invalid_argument);
    CHECK_THROWS_AS(parse(json{{"kind", "universality"}, {"phases", "sideways"}}),
                    std::invalid_argument);
}

TEST_CASE("trial polynomials are reproducible and distinct") {
    ExperimentConfig cfg;
    cfg.seed = 42;
    const poly::TrigPolynomial p1 = trial_polynomial(cfg, 16, 3);
    const poly::TrigPolynomial p2 = trial_polynomial(cfg, 16, 3);
    CHECK(p1.degree() == 16);
    CHECK(p1.coeff_a() == p2.coeff_a());
    CHECK(p1.coeff_b() == p2.coeff_b());

    const poly::TrigPolynomial q = trial_polynomial(cfg, 16, 4);
    CHECK(p1.coeff_a() != q.coeff_a());
    cfg.seed = 43;
    const poly::TrigPolynomial r = trial_polynomial(cfg, 16, 3);
    CHECK(p1.coeff_a() != r.coeff_a());

    cfg.seed = 42;
    cfg.phases = poly::PhasePolicy::uniform_random(0);
    const poly::TrigPolynomial ph0 = trial_polynomial(cfg, 16, 0);
    const poly::TrigPolynomial ph1 = trial_polynomial(cfg, 16, 1);
    const poly::TrigPolynomial ph0b = trial_polynomial(cfg, 16, 0);
    REQUIRE(ph0.phases().size() == 16);
    CHECK(ph0.phases() == ph0b.phases());
    CHECK(ph0.phases() != ph1.phases());
}

TEST_CASE("certified trial counts agree with the direct pipeline") {
    ExperimentConfig cfg;
    cfg.seed = 11;
    const long n = 25;
    long certified = 0;
    for (long trial = 0; trial < 10; ++trial) {
        const poly::TrigPolynomial p = trial_polynomial(cfg, n, trial);
        const TrialCount tc = count_zeros_certified(p, 0.0, kTwoPi, 1.3);
        CHECK(tc.count > 0);
        if (!tc.certified) continue;
        ++certified;
        CHECK(tc.omega_lower > 0.0);
        CHECK(tc.delta > 0.0);
        CHECK(tc.delta <= std::pow(double(n), -1.3) + 1e-18);

        bool nudged = false;
        double amount = 0.0;
        const auto mode = poly::EvalMode::Rescaled;
        const zeros::Interval J =
            zeros::nudge_endpoints(p, {0.0, kTwoPi * double(n)}, mode, nudged, amount);
        zeros::AdaptiveOptions opt;
        opt.initial_cells = zeros::default_initial_cells(p, J, mode);
        const zeros::ZeroCount sc = zeros::count_sign_changes(p, J, mode, opt);
        CHECK(sc.certified);
        CHECK(sc.count == tc.count);
    }
    CHECK(certified >= 8);
}

TEST_CASE("universality runs match the gaussian closed form") {
    const ExperimentConfig cfg = quick_universality();
    const ExperimentReport rep = run_universality(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.kind == ExperimentKind::Universality);
    CHECK(rep.law_id == "gaussian(0,1)");
    CHECK(rep.seed == 7);
    CHECK(rep.config_hash.size() == 16);
    CHECK(!rep.flagged);
    for (const ReportRow& row : rep.rows) {
        CAPTURE(row.n);
        CHECK(row.trials == 60);
        CHECK(row.reference ==
              doctest::Approx(gauss::exact_expected_zeros(int(row.n), cfg.lo, cfg.hi)));
        CHECK(row.mean_over_n == doctest::Approx(row.mean / double(row.n)));
        CHECK(row.certified_fraction >= 0.99);
        CHECK(std::abs(row.mean - row.reference) < 3.0 * row.std_error + 1e-9);
    }
}

TEST_CASE("halving the interval halves the count") {
    ExperimentConfig whole;
    whole.kind = ExperimentKind::Universality;
    whole.n_list = {30};
    whole.trials = 80;
    whole.seed = 21;
    ExperimentConfig half = whole;
    half.hi = std::numbers::pi;

    const ReportRow w = run_universality(whole).rows.at(0);
    const ReportRow h = run_universality(half).rows.at(0);
    CHECK(std::abs(h.mean - 0.5 * w.mean) < 2.0 * (h.std_error + 0.5 * w.std_error) + 1e-9);
}

TEST_CASE("degenerate threshold exponent puts every trial below") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Threshold;
    cfg.n_list = {10, 20};
    cfg.trials = 25;
    cfg.seed = 3;
    cfg.theta = 1.0;
    const ExperimentReport rep = run_threshold(cfg);
    REQUIRE(rep.rows.size() == 2);
    for (const ReportRow& row : rep.rows) {
        CHECK(row.mean == 1.0);
        CHECK(row.std_error == 0.0);
        CHECK(row.reference == doctest::Approx(double(row.n)));
        CHECK(row.certified_fraction == 1.0);
    }
}

TEST_CASE("csv headers are pinned per experiment kind") {
    ExperimentConfig cfg = quick_universality();
    cfg.n_list = {10};
    cfg.trials = 12;
    const ExperimentReport uni = run_universality(cfg);
    const std::string uni_csv = report_csv(uni);
    CHECK(first_line(uni_csv) ==
          "n,trials,mean_count,std_error,mean_over_n,gaussian_reference,certified_fraction");
    CHECK(line_count(uni_csv) == 2);
    CHECK(uni_csv.find("\r") == std::string::npos);

    cfg.kind = ExperimentKind::Threshold;
    const ExperimentReport thr = run_threshold(cfg);
    CHECK(first_line(report_csv(thr)) == "n,trials,freq_below,std_error,tau,certified_fraction");

    cfg.kind = ExperimentKind::SmallBall;
    cfg.trials = 500;
    const ExperimentReport sb = run_smallball(cfg);
    CHECK(first_line(report_csv(sb)) == "n,gamma,trials,hits,estimate,std_error");
    CHECK(sb.rows.at(0).reference ==
          doctest::Approx(gauss::gaussian_small_ball(gauss::spectral_moments(10).sigma,
                                                     std::pow(10.0, -cfg.gamma))));

    ExperimentConfig cc;
    cc.kind = ExperimentKind::Cramer;
    cc.cramer_b = 0.5;
    cc.cramer_C = 0.5;
    cc.cramer_R = 2.0;
    cc.cramer_tmax = 40.0;
    const ExperimentReport cr = run_cramer(cc);
    const std::string cr_csv = report_csv(cr);
    CHECK(first_line(cr_csv) == "window_center,sup_abs_phi,argmax_t");
    CHECK(line_count(cr_csv) >= 2);
    CHECK(cr.note == "pass");
    CHECK(cr.extra.at("certificate").at("pass").get<bool>());

    ExperimentConfig ce;
    ce.kind = ExperimentKind::Edgeworth;
    ce.law = dist::CoefficientLaw::make_sqrt_primes();
    ce.n_list = {5};
    ce.s = 3;
    const ExperimentReport ed = run_edgeworth(ce);
    const std::string ed_csv = report_csv(ed);
    CHECK(first_line(ed_csv) == "n,x,oracle,gaussian,edgeworth");
    CHECK(line_count(ed_csv) == 162);
    CHECK(ed.rows.at(0).mean < ed.rows.at(0).reference);
}

TEST_CASE("failing probe is reported in the cramer note") {
    ExperimentConfig cc;
    cc.kind = ExperimentKind::Cramer;
    cc.law = dist::CoefficientLaw::make_rademacher();
    cc.cramer_b = 1.0;
    cc.cramer_C = 0.01;
    cc.cramer_R = 1.0;
    cc.cramer_tmax = 100.0;
    const ExperimentReport rep = run_cramer(cc);
    CHECK(rep.note == "fail");
    CHECK(!rep.extra.at("certificate").at("pass").get<bool>());
}

TEST_CASE("worker count never changes the numbers") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Universality;
    cfg.n_list = {15};
    cfg.trials = 40;
    cfg.seed = 13;
    cfg.workers = 1;
    const ExperimentReport serial = run_universality(cfg);
    cfg.workers = 3;
    const ExperimentReport parallel = run_universality(cfg);

    CHECK(report_csv(serial) == report_csv(parallel));
    CHECK(serial.config_hash == parallel.config_hash);
    CHECK(report_to_json(serial) == report_to_json(parallel));
}

TEST_CASE("suites write one csv per experiment plus a json report") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "rtpz_suite_test";
    fs::remove_all(base);

    const json config = {
        {"seed", 5},
        {"workers", 2},
        {"experiments",
         {{{"kind", "universality"}, {"n", {10}}, {"trials", 20}},
          {{"kind", "edgeworth"}, {"law", "sqrt-primes"}, {"n", {5}}}}}};

    const SuiteResult a = run_suite(config, (base / "a").string());
    REQUIRE(a.reports.size() == 2);
    REQUIRE(a.csv_paths.size() == 2);
    CHECK(a.csv_paths[0] == (base / "a").string() + "/000_universality.csv");
    CHECK(a.csv_paths[1] == (base / "a").string() + "/001_edgeworth.csv");
    CHECK(fs::exists(a.csv_paths[0]));
    CHECK(fs::exists(a.csv_paths[1]));
    CHECK(fs::exists(base / "a" / "report.json"));
    CHECK(!a.flagged);

    json rerun = config;
    rerun["workers"] = 1;
    const SuiteResult b = run_suite(rerun, (base / "b").string());
    for (size_t i = 0; i < a.csv_paths.size(); ++i) {
        CAPTURE(i);
        CHECK(slurp(a.csv_paths[i]) == slurp(b.csv_paths[i]));
    }
    const json sum_a = json::parse(slurp((base / "a" / "report.json").string()));
    const json sum_b = json::parse(slurp((base / "b" / "report.json").string()));
    CHECK(sum_a.at("reports") == sum_b.at("reports"));
    CHECK(sum_a.at("version").get<std::string>() == kVersion);

    const SuiteResult empty = run_suite(json{{"experiments", json::array()}},
                                        (base / "empty").string());
    CHECK(empty.reports.empty());
    CHECK(empty.csv_paths.empty());
    CHECK(!empty.flagged);
    CHECK(fs::exists(base / "empty" / "report.json"));

    fs::remove_all(base);
}
