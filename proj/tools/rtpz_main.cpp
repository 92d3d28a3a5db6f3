#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtpz/cramer.hpp"
#include "rtpz/edgeworth.hpp"
#include "rtpz/gaussian_reference.hpp"
#include "rtpz/harness.hpp"
#include "rtpz/serialize.hpp"
#include "rtpz/zeros.hpp"

namespace {

using nlohmann::json;
using namespace rtpz;

constexpr double kTwoPi = 6.283185307179586476925286766559;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

poly::PhasePolicy parse_phases(const std::string& s) {
    if (s == "zero") return poly::PhasePolicy::zero();
    if (s == "uniform") return poly::PhasePolicy::uniform_random(0);
    if (s.rfind("uniform:", 0) == 0)
        return poly::PhasePolicy::uniform_random(std::stoull(s.substr(8)));
    if (s.rfind("constant:", 0) == 0)
        return poly::PhasePolicy::constant_phase(std::stod(s.substr(9)));
    throw std::invalid_argument("unknown phase policy \"" + s +
                                "\" (zero | uniform[:seed] | constant:x)");
}

poly::EvalMode parse_mode(const std::string& s) {
    if (s == "raw") return poly::EvalMode::Raw;
    if (s == "normalized") return poly::EvalMode::Normalized;
    if (s == "rescaled") return poly::EvalMode::Rescaled;
    throw std::invalid_argument("unknown mode \"" + s + "\" (raw | normalized | rescaled)");
}

// Writes the per-kind CSV (and report.json when out_dir is set) and returns
// the process exit code: 0 clean, 2 when the report is flagged.
int emit_report(const harness::ExperimentReport& rep, const std::string& out_dir) {
    const std::string csv = harness::report_csv(rep);
    if (out_dir.empty()) {
        std::cout << csv;
        std::cerr << harness::report_to_json(rep).dump(2) << "\n";
    } else {
        std::filesystem::create_directories(out_dir);
        const std::string base = out_dir + "/" + harness::kind_name(rep.kind);
        std::ofstream cf(base + ".csv", std::ios::binary);
        cf << csv;
        std::ofstream jf(base + ".json", std::ios::binary);
        jf << harness::report_to_json(rep).dump(2) << "\n";
        std::cout << base << ".csv\n" << base << ".json\n";
    }
    if (rep.flagged) {
        std::cerr << "warning: " << (rep.note.empty() ? "report flagged" : rep.note) << "\n";
        return 2;
    }
    return 0;
}

struct CommonFlags {
    std::string law = "gaussian";
    std::vector<long> n_list;
    std::vector<double> interval;
    long trials = 0;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string phases = "zero";
    std::string out_dir;
    std::string config_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--law", f.law,
                    "coefficient law: gaussian | rademacher | sqrt-primes | uniform | "
                    "cos-atoms:P | blocked-cosine:P | sqrt-poisson:L | @file | inline JSON");
    cmd->add_option("--n,--n-list", f.n_list, "polynomial degrees");
    cmd->add_option("--interval", f.interval, "interval endpoints lo hi")->expected(2);
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per n");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_option("--phases", f.phases, "phase policy: zero | uniform[:seed] | constant:x");
    cmd->add_option("--out-dir", f.out_dir, "write CSV and JSON report here (default stdout)");
    cmd->add_option("--config", f.config_path, "JSON experiment config (flags override)");
}

harness::ExperimentConfig build_config(harness::ExperimentKind kind, const CommonFlags& f,
                                       const CLI::App* cmd) {
    json j = f.config_path.empty() ? json::object() : load_json_file(f.config_path);
    j["kind"] = harness::kind_name(kind);
    harness::ExperimentConfig cfg = harness::config_from_json(j, f.seed, f.workers);
    if (cmd->count("--law") > 0 || !j.contains("law"))
        cfg.law = serialize::law_from_spec(f.law);
    if (!f.n_list.empty()) cfg.n_list = f.n_list;
    if (!f.interval.empty()) {
        cfg.lo = f.interval[0];
        cfg.hi = f.interval[1];
        if (!(cfg.lo < cfg.hi)) throw std::invalid_argument("interval requires lo < hi");
    }
    if (f.trials > 0) cfg.trials = f.trials;
    cfg.seed = f.seed;
    cfg.workers = f.workers;
    cfg.phases = parse_phases(f.phases);
    return cfg;
}

} // namespace

int main(int argc, char** argv) try {
    CLI::App app{"zero counting and distribution experiments for random "
                 "trigonometric polynomials"};
    app.require_subcommand(0, 1);

    std::string suite_config, suite_out = "out";
    std::uint64_t suite_seed = 0;
    int suite_workers = 0;
    app.add_option("--config", suite_config, "suite JSON: run every configured experiment");
    app.add_option("--out-dir", suite_out, "suite output directory");
    app.add_option("--seed", suite_seed, "override suite seed");
    app.add_option("--workers", suite_workers, "override suite worker count");

    CommonFlags uf, tf, sf, ef;
    double theta = -1.25, r_exp = 1.3, gamma = 0.6, t_point = 1.0;
    int s_order = 3;

    auto* uni = app.add_subcommand("universality", "mean zero count vs the Gaussian reference");
    add_common(uni, uf);
    uni->add_option("--r", r_exp, "Kac-Rice width exponent, delta <= n^-r");

    auto* thr = app.add_subcommand("threshold", "frequency of { omega_n < n^theta }");
    add_common(thr, tf);
    thr->add_option("--theta", theta, "threshold exponent");

    auto* ball = app.add_subcommand("small-ball", "P(|(U_n, U_n')| <= n^-gamma) by Monte Carlo");
    add_common(ball, sf);
    ball->add_option("--gamma", gamma, "radius exponent");
    ball->add_option("--t", t_point, "evaluation angle");

    auto* edge = app.add_subcommand("edgeworth", "exact coefficient-sum CDF vs Edgeworth");
    add_common(edge, ef);
    edge->add_option("--s", s_order, "expansion order (2..5)");
    std::string edge_mode = "cdf-check";
    double edge_r = 1.3, edge_t = 1.0;
    edge->add_option("--mode", edge_mode, "cdf-check | kac-functional");
    edge->add_option("--r", edge_r, "functional width exponent, delta = n^-r");
    edge->add_option("--t", edge_t, "evaluation angle for the functional");

    auto* probe = app.add_subcommand("cramer-probe", "characteristic-function decay probe");
    std::string pr_law = "gaussian", pr_out;
    double pr_b = 1.0, pr_C = 0.1, pr_R = 1.0, pr_tmax = 100.0, pr_window = 2.0;
    probe->add_option("--law", pr_law, "coefficient law");
    probe->add_option("--b", pr_b, "decay exponent to certify");
    probe->add_option("--C", pr_C, "decay constant to certify");
    probe->add_option("--R", pr_R, "probe start");
    probe->add_option("--tmax", pr_tmax, "probe end");
    probe->add_option("--window,--windows", pr_window, "envelope window width");
    probe->add_option("--out-dir", pr_out, "write envelope CSV here (default stdout)");

    auto* cz = app.add_subcommand("count-zeros", "certified zero count of one polynomial");
    std::string cz_law = "gaussian", cz_poly, cz_mode = "normalized", cz_method = "kac-rice";
    long cz_n = 50;
    std::vector<double> cz_iv;
    double cz_delta = 0.0;
    std::uint64_t cz_seed = 1;
    bool cz_roots = false;
    cz->add_option("--law", cz_law, "coefficient law to sample from");
    cz->add_option("--poly-file", cz_poly, "JSON polynomial {n, a, b, theta} instead of sampling");
    cz->add_option("--n", cz_n, "degree when sampling");
    cz->add_option("--seed", cz_seed, "sampling seed");
    cz->add_option("--interval", cz_iv, "interval endpoints lo hi")->expected(2);
    cz->add_option("--mode", cz_mode, "raw | normalized | rescaled");
    cz->add_option("--method", cz_method, "sign-changes | kac-rice");
    cz->add_option("--delta", cz_delta, "Kac-Rice band half-width (default: auto-certified)");
    cz->add_flag("--roots", cz_roots, "include refined root locations");

    auto* gx = app.add_subcommand("gaussian-exact", "closed-form Gaussian references");
    long gx_n = 50;
    std::vector<double> gx_iv;
    double gx_r = 1.3;
    gx->add_option("--n", gx_n, "degree");
    gx->add_option("--interval", gx_iv, "interval endpoints lo hi")->expected(2);
    gx->add_option("--r", gx_r, "Kac functional width exponent");

    CLI11_PARSE(app, argc, argv);

    if (app.get_subcommands().empty()) {
        if (suite_config.empty()) {
            std::cerr << app.help();
            return 1;
        }
        json cfg = load_json_file(suite_config);
        if (suite_seed != 0) cfg["seed"] = suite_seed;
        if (suite_workers != 0) cfg["workers"] = suite_workers;
        const harness::SuiteResult res = harness::run_suite(cfg, suite_out);
        for (const std::string& p : res.csv_paths) std::cout << p << "\n";
        std::cout << suite_out << "/report.json\n";
        return res.flagged ? 2 : 0;
    }

    if (uni->parsed()) {
        harness::ExperimentConfig cfg = build_config(harness::ExperimentKind::Universality, uf, uni);
        cfg.r = r_exp;
        return emit_report(harness::run_universality(cfg), uf.out_dir);
    }
    if (thr->parsed()) {
        harness::ExperimentConfig cfg = build_config(harness::ExperimentKind::Threshold, tf, thr);
        if (thr->count("--theta") > 0) cfg.theta = theta;
        return emit_report(harness::run_threshold(cfg), tf.out_dir);
    }
    if (ball->parsed()) {
        harness::ExperimentConfig cfg = build_config(harness::ExperimentKind::SmallBall, sf, ball);
        if (ball->count("--gamma") > 0) cfg.gamma = gamma;
        if (ball->count("--t") > 0) cfg.t_point = t_point;
        return emit_report(harness::run_smallball(cfg), sf.out_dir);
    }
    if (edge->parsed()) {
        harness::ExperimentConfig cfg = build_config(harness::ExperimentKind::Edgeworth, ef, edge);
        if (edge->count("--s") > 0) cfg.s = s_order;
        if (edge_mode == "cdf-check")
            return emit_report(harness::run_edgeworth(cfg), ef.out_dir);
        if (edge_mode != "kac-functional")
            throw std::invalid_argument("edgeworth --mode must be cdf-check or kac-functional");
        const dist::CoefficientLaw law =
            cfg.law.is_standardized() ? cfg.law : cfg.law.standardized();
        json rows = json::array();
        for (long n : cfg.n_list) {
            const edgeworth::CumulantTable table =
                edgeworth::average_cumulants_bivariate(law, n, edge_t, 4);
            const double value = edgeworth::edgeworth_kac_functional(table, n, edge_r, 2);
            const double gaussian = gauss::gaussian_kac_functional(n, edge_r);
            rows.push_back({{"n", n},
                            {"value", value},
                            {"gaussian", gaussian},
                            {"correction", value - gaussian}});
        }
        const json rep = {{"mode", "kac-functional"},
                          {"law", law.describe()},
                          {"r", edge_r},
                          {"t", edge_t},
                          {"l_max", 2},
                          {"rows", rows},
                          {"universal_density", gauss::kUniversalZeroDensity}};
        if (ef.out_dir.empty()) {
            std::cout << rep.dump(2) << "\n";
        } else {
            std::filesystem::create_directories(ef.out_dir);
            std::ofstream rf(ef.out_dir + "/edgeworth_functional.json", std::ios::binary);
            rf << rep.dump(2) << "\n";
            std::cout << ef.out_dir << "/edgeworth_functional.json\n";
        }
        return 0;
    }
    if (probe->parsed()) {
        harness::ExperimentConfig cfg;
        cfg.kind = harness::ExperimentKind::Cramer;
        cfg.law = serialize::law_from_spec(pr_law);
        cfg.cramer_b = pr_b;
        cfg.cramer_C = pr_C;
        cfg.cramer_R = pr_R;
        cfg.cramer_tmax = pr_tmax;
        cfg.cramer_window = pr_window;
        const harness::ExperimentReport rep = harness::run_cramer(cfg);
        std::cout << rep.extra.at("certificate").dump(2) << "\n";
        if (pr_out.empty()) {
            std::cout << harness::report_csv(rep);
        } else {
            std::filesystem::create_directories(pr_out);
            std::ofstream cf(pr_out + "/cramer.csv", std::ios::binary);
            cf << harness::report_csv(rep);
            std::cout << pr_out << "/cramer.csv\n";
        }
        return 0;
    }
    if (cz->parsed()) {
        poly::TrigPolynomial p = [&] {
            if (!cz_poly.empty()) {
                std::ifstream in(cz_poly);
                if (!in) throw std::runtime_error("cannot open polynomial file: " + cz_poly);
                return serialize::poly_from_json(json::parse(in));
            }
            const dist::CoefficientLaw law = serialize::law_from_spec(cz_law);
            RngStream stream(RngStream::derive(cz_seed, static_cast<std::uint64_t>(cz_n), 0));
            return poly::sample_polynomial(law, static_cast<int>(cz_n),
                                           poly::PhasePolicy::zero(), stream);
        }();
        const poly::EvalMode mode = parse_mode(cz_mode);
        zeros::Interval iv{0.0, kTwoPi * (mode == poly::EvalMode::Rescaled ? p.degree() : 1)};
        if (!cz_iv.empty()) {
            iv = {cz_iv[0], cz_iv[1]};
            if (!(iv.lo < iv.hi)) throw std::invalid_argument("interval requires lo < hi");
        }
        bool nudged = false;
        double amount = 0.0;
        iv = zeros::nudge_endpoints(p, iv, mode, nudged, amount);

        zeros::ZeroCount zc;
        double delta = cz_delta;
        zeros::ThresholdReport rep =
            zeros::estimate_threshold(p, iv, mode, zeros::default_initial_cells(p, iv, mode));
        if (cz_method == "sign-changes") {
            zc = zeros::count_sign_changes(p, iv, mode, {}, cz_roots);
        } else if (cz_method == "kac-rice") {
            if (delta <= 0.0) {
                const zeros::ThresholdReport cert = zeros::certify_threshold_adaptive(p, iv, mode);
                if (!cert.certified() || !(cert.delta_max > 0.0))
                    throw std::runtime_error("threshold certification failed; pass --delta");
                rep = cert;
                delta = cert.delta_max / 2.0;
                zc = zeros::kac_rice_count(p, iv, mode, delta, &cert, {}, cz_roots);
            } else {
                zc = zeros::kac_rice_count(p, iv, mode, delta, nullptr, {}, cz_roots);
            }
        } else {
            throw std::invalid_argument("unknown method \"" + cz_method + "\"");
        }
        json out = {{"n", p.degree()},
                    {"interval", {iv.lo, iv.hi}},
                    {"mode", cz_mode},
                    {"method", cz_method},
                    {"count", zc.count},
                    {"certified", zc.certified},
                    {"threshold_violation", zc.threshold_violation},
                    {"cells_used", zc.cells_used},
                    {"omega_lower", rep.omega_lower}};
        if (cz_method == "kac-rice") out["delta"] = delta;
        if (zc.endpoint_nudged || nudged) out["endpoint_nudge"] = std::max(amount, zc.nudge);
        if (cz_roots) out["roots"] = zc.roots;
        std::cout << out.dump(2) << "\n";
        return zc.certified ? 0 : 2;
    }
    if (gx->parsed()) {
        const double lo = gx_iv.empty() ? 0.0 : gx_iv[0];
        const double hi = gx_iv.empty() ? kTwoPi : gx_iv[1];
        const auto sm = gauss::spectral_moments(static_cast<int>(gx_n));
        const json out = {
            {"n", gx_n},
            {"interval", {lo, hi}},
            {"expected_zeros", gauss::exact_expected_zeros(static_cast<int>(gx_n), lo, hi)},
            {"sigma_n", sm.sigma},
            {"kac_functional", gauss::gaussian_kac_functional(gx_n, gx_r)},
            {"universal_density", gauss::kUniversalZeroDensity}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    return 0;
} catch (const std::exception& e) {
    std::cerr << "rtpz: " << e.what() << "\n";
    return 1;
}
