#include "rtpz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rtpz/cramer.hpp"
#include "rtpz/edgeworth.hpp"
#include "rtpz/gaussian_reference.hpp"
#include "rtpz/parallel.hpp"
#include "rtpz/serialize.hpp"
#include "rtpz/smallball.hpp"

namespace rtpz::harness {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double sample_std_error(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0)) /
           std::sqrt(static_cast<double>(xs.size()));
}

json phases_to_json(const poly::PhasePolicy& ph) {
    using Kind = poly::PhasePolicy::Kind;
    switch (ph.kind) {
    case Kind::Zero: return "zero";
    case Kind::Constant: return json{{"kind", "constant"}, {"value", ph.constant}};
    case Kind::UniformRandom: return json{{"kind", "uniform"}, {"seed", ph.seed}};
    case Kind::Explicit: return json{{"kind", "explicit"}, {"values", ph.values}};
    }
    return "zero";
}

poly::PhasePolicy phases_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "zero") return poly::PhasePolicy::zero();
        if (s == "uniform") return poly::PhasePolicy::uniform_random(0);
        throw std::invalid_argument("harness: unknown phase policy \"" + s + "\"");
    }
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") return poly::PhasePolicy::zero();
    if (kind == "constant") return poly::PhasePolicy::constant_phase(j.value("value", 0.0));
    if (kind == "uniform") return poly::PhasePolicy::uniform_random(j.value("seed", 0));
    if (kind == "explicit")
        return poly::PhasePolicy::explicit_phases(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("harness: unknown phase policy \"" + kind + "\"");
}

// Canonical config image used for the provenance hash; excludes the worker
// count so reruns with different parallelism hash (and compare) identically.
json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["kind"] = kind_name(cfg.kind);
    j["law"] = serialize::law_to_json(cfg.law);
    j["n"] = cfg.n_list;
    j["interval"] = {cfg.lo, cfg.hi};
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["r"] = cfg.r;
    j["theta"] = cfg.theta;
    j["gamma"] = cfg.gamma;
    j["t"] = cfg.t_point;
    j["s"] = cfg.s;
    j["phases"] = phases_to_json(cfg.phases);
    if (cfg.kind == ExperimentKind::Cramer)
        j["cramer"] = {{"b", cfg.cramer_b},
                       {"C", cfg.cramer_C},
                       {"R", cfg.cramer_R},
                       {"tmax", cfg.cramer_tmax},
                       {"window", cfg.cramer_window}};
    return j;
}

ExperimentReport make_report(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.kind = cfg.kind;
    rep.law_id = cfg.law.describe();
    rep.seed = cfg.seed;
    rep.config_hash = config_hash_hex(config_to_json(cfg));
    return rep;
}

} // namespace

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::Universality: return "universality";
    case ExperimentKind::Threshold: return "threshold";
    case ExperimentKind::SmallBall: return "small-ball";
    case ExperimentKind::Cramer: return "cramer";
    case ExperimentKind::Edgeworth: return "edgeworth";
    }
    return "unknown";
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const json& config) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.dump())));
    return buf;
}

poly::TrigPolynomial trial_polynomial(const ExperimentConfig& cfg, long n, long trial) {
    const std::uint64_t key = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(n),
                                                     static_cast<std::uint64_t>(trial));
    RngStream stream(key);
    poly::PhasePolicy ph = cfg.phases;
    if (ph.kind == poly::PhasePolicy::Kind::UniformRandom)
        ph.seed = RngStream::derive(key, 0x7068617365ULL);
    return poly::sample_polynomial(cfg.law, static_cast<int>(n), ph, stream);
}

TrialCount count_zeros_certified(const poly::TrigPolynomial& p, double lo, double hi,
                                 double r, int resolution_scale) {
    const int n = p.degree();
    const auto mode = poly::EvalMode::Rescaled;
    bool nudged = false;
    double amount = 0.0;
    const zeros::Interval J =
        zeros::nudge_endpoints(p, {lo * n, hi * n}, mode, nudged, amount);
    const double nr = std::pow(static_cast<double>(n), -r);

    zeros::AdaptiveOptions topt; // bound mode: certify the trial's own threshold
    topt.initial_cells = resolution_scale * zeros::default_initial_cells(p, J, mode);
    const zeros::ThresholdReport rep = zeros::certify_threshold_adaptive(p, J, mode, topt);

    TrialCount out;
    out.omega_lower = rep.omega_lower;

    zeros::AdaptiveOptions copt;
    copt.initial_cells = topt.initial_cells;
    const zeros::ZeroCount sc = zeros::count_sign_changes(p, J, mode, copt);

    if (!rep.certified() || !(rep.delta_max > 0.0)) {
        out.count = sc.count;
        return out;
    }
    out.delta = std::min(rep.delta_max / 2.0, nr);
    const zeros::ZeroCount kr = zeros::kac_rice_count(p, J, mode, out.delta, &rep, copt);
    out.certified = kr.certified && sc.certified && kr.count == sc.count;
    out.count = out.certified || !sc.certified ? kr.count : sc.count;
    return out;
}

ExperimentReport run_universality(const ExperimentConfig& cfg) {
    ExperimentReport rep = make_report(cfg);
    for (const long n : cfg.n_list) {
        auto outcomes = par::parallel_map<TrialCount>(cfg.trials, cfg.workers, [&](long trial) {
            const poly::TrigPolynomial p = trial_polynomial(cfg, n, trial);
            TrialCount tc = count_zeros_certified(p, cfg.lo, cfg.hi, cfg.r);
            if (!tc.certified) tc = count_zeros_certified(p, cfg.lo, cfg.hi, cfg.r, 2);
            return tc;
        });
        std::vector<double> counts(outcomes.size());
        long certified = 0;
        for (size_t i = 0; i < outcomes.size(); ++i) {
            counts[i] = static_cast<double>(outcomes[i].count);
            certified += outcomes[i].certified ? 1 : 0;
        }
        ReportRow row;
        row.n = n;
        row.trials = cfg.trials;
        row.mean = std::accumulate(counts.begin(), counts.end(), 0.0) /
                   static_cast<double>(counts.size());
        row.std_error = sample_std_error(counts, row.mean);
        row.mean_over_n = row.mean / static_cast<double>(n);
        row.reference = gauss::exact_expected_zeros(static_cast<int>(n), cfg.lo, cfg.hi);
        row.certified_fraction =
            static_cast<double>(certified) / static_cast<double>(cfg.trials);
        rep.rows.push_back(row);
        if (row.certified_fraction < 0.99) {
            rep.flagged = true;
            rep.note = "uncertified trials above 1% at n=" + std::to_string(n);
        }
    }
    return rep;
}

ExperimentReport run_threshold(const ExperimentConfig& cfg) {
    ExperimentReport rep = make_report(cfg);
    struct Outcome {
        bool below = false;
        bool certified = false;
    };
    for (const long n : cfg.n_list) {
        const double tau = std::pow(static_cast<double>(n), cfg.theta);
        auto outcomes = par::parallel_map<Outcome>(cfg.trials, cfg.workers, [&](long trial) {
            const poly::TrigPolynomial p = trial_polynomial(cfg, n, trial);
            const zeros::Interval J{cfg.lo * static_cast<double>(n),
                                    cfg.hi * static_cast<double>(n)};
            zeros::AdaptiveOptions topt;
            topt.target = tau;
            const zeros::ThresholdReport tr =
                zeros::certify_threshold_adaptive(p, J, poly::EvalMode::Rescaled, topt);
            // omega_lower < tau over-counts: an unresolved trial counts as below.
            // The verdict is rigorous when either side is proven.
            return Outcome{tr.omega_lower < tau,
                           tr.omega_upper < tau || tr.omega_lower >= tau};
        });
        long below = 0, certified = 0;
        for (const Outcome& o : outcomes) {
            below += o.below ? 1 : 0;
            certified += o.certified ? 1 : 0;
        }
        ReportRow row;
        row.n = n;
        row.trials = cfg.trials;
        row.mean = static_cast<double>(below) / static_cast<double>(cfg.trials);
        row.std_error =
            std::sqrt(row.mean * (1.0 - row.mean) / static_cast<double>(cfg.trials));
        row.reference = tau;
        row.certified_fraction =
            static_cast<double>(certified) / static_cast<double>(cfg.trials);
        rep.rows.push_back(row);
    }
    return rep;
}

ExperimentReport run_smallball(const ExperimentConfig& cfg) {
    ExperimentReport rep = make_report(cfg);
    json series = json::array();
    for (const long n : cfg.n_list) {
        const RngStream stream(
            RngStream::derive(cfg.seed, static_cast<std::uint64_t>(n), 0xba11ULL));
        const smallball::SmallBallEstimate est =
            smallball::small_ball_mc(cfg.law, n, cfg.t_point, cfg.gamma, cfg.trials, stream);
        ReportRow row;
        row.n = n;
        row.trials = cfg.trials;
        row.mean = est.estimate;
        row.std_error = est.std_error;
        row.reference = gauss::gaussian_small_ball(
            gauss::spectral_moments(static_cast<int>(n)).sigma, est.radius);
        row.certified_fraction = 1.0;
        rep.rows.push_back(row);
        series.push_back({{"n", n}, {"hits", est.hits}, {"radius", est.radius}});
    }
    rep.extra = {{"gamma", cfg.gamma}, {"t", cfg.t_point}, {"series", series}};
    return rep;
}

ExperimentReport run_cramer(const ExperimentConfig& cfg) {
    ExperimentReport rep = make_report(cfg);
    const cramer::EnvelopeTable env =
        cramer::envelope(cfg.law, cfg.cramer_R, cfg.cramer_tmax, cfg.cramer_window);
    const cramer::CramerCertificate cert = cramer::probe_weak_cramer(
        cfg.law, cfg.cramer_b, cfg.cramer_C, cfg.cramer_R, cfg.cramer_tmax);
    rep.extra = {{"certificate",
                  {{"b", cert.b},
                   {"C", cert.C},
                   {"R", cert.R},
                   {"T_max", cert.T_max},
                   {"pass", cert.pass},
                   {"worst_t", cert.worst_t},
                   {"worst_margin", cert.worst_margin}}},
                 {"envelope",
                  {{"half_width", env.half_width},
                   {"centers", env.centers},
                   {"sup_abs_phi", env.sup_abs_phi},
                   {"argmax_t", env.argmax_t}}}};
    rep.note = cert.pass ? "pass" : "fail";
    return rep;
}

ExperimentReport run_edgeworth(const ExperimentConfig& cfg) {
    ExperimentReport rep = make_report(cfg);
    const edgeworth::CumulantTable table =
        edgeworth::average_cumulants({cfg.law}, std::max(cfg.s, 4));
    json grid = json::array();
    json distances = json::array();
    for (const long n : cfg.n_list) {
        const edgeworth::DiscreteCdf oracle =
            edgeworth::exact_sum_cdf_oracle(cfg.law, static_cast<int>(n));
        auto edge = [&](double x) { return edgeworth::edgeworth_cdf_1d(table, n, cfg.s, x); };
        const double d_gauss = edgeworth::kolmogorov_distance(
            oracle, [](double x) { return gauss::norm_cdf(x); });
        const double d_edge = edgeworth::kolmogorov_distance(oracle, edge);
        distances.push_back({{"n", n},
                             {"gaussian", d_gauss},
                             {"edgeworth", d_edge},
                             {"ratio", d_gauss > 0.0 ? d_edge / d_gauss : 0.0}});
        for (int i = 0; i <= 160; ++i) {
            const double x = -4.0 + 8.0 * i / 160.0;
            grid.push_back({{"n", n},
                            {"x", x},
                            {"oracle", oracle.cdf(x)},
                            {"gaussian", gauss::norm_cdf(x)},
                            {"edgeworth", edge(x)}});
        }
        ReportRow row;
        row.n = n;
        row.trials = static_cast<long>(oracle.atoms().size());
        row.mean = d_edge;
        row.reference = d_gauss;
        row.mean_over_n = d_gauss > 0.0 ? d_edge / d_gauss : 0.0;
        row.certified_fraction = 1.0;
        rep.rows.push_back(row);
    }
    rep.extra = {{"s", cfg.s}, {"distances", distances}, {"grid", grid}};
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
    case ExperimentKind::Universality: return run_universality(cfg);
    case ExperimentKind::Threshold: return run_threshold(cfg);
    case ExperimentKind::SmallBall: return run_smallball(cfg);
    case ExperimentKind::Cramer: return run_cramer(cfg);
    case ExperimentKind::Edgeworth: return run_edgeworth(cfg);
    }
    throw std::invalid_argument("harness: unknown experiment kind");
}

ExperimentConfig config_from_json(const json& j, std::uint64_t default_seed,
                                  int default_workers) {
    ExperimentConfig cfg;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "universality")
        cfg.kind = ExperimentKind::Universality;
    else if (kind == "threshold")
        cfg.kind = ExperimentKind::Threshold;
    else if (kind == "small-ball")
        cfg.kind = ExperimentKind::SmallBall;
    else if (kind == "cramer")
        cfg.kind = ExperimentKind::Cramer;
    else if (kind == "edgeworth")
        cfg.kind = ExperimentKind::Edgeworth;
    else
        throw std::invalid_argument("harness: unknown experiment kind \"" + kind + "\"");

    if (j.contains("law")) {
        const json& lj = j.at("law");
        cfg.law = lj.is_string() ? serialize::law_from_spec(lj.get<std::string>())
                                 : serialize::law_from_json(lj);
    }
    if (j.contains("n")) {
        const json& nj = j.at("n");
        cfg.n_list = nj.is_array() ? nj.get<std::vector<long>>()
                                   : std::vector<long>{nj.get<long>()};
    }
    if (j.contains("interval")) {
        cfg.lo = j.at("interval").at(0).get<double>();
        cfg.hi = j.at("interval").at(1).get<double>();
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", default_seed);
    cfg.r = j.value("r", cfg.r);
    cfg.theta = j.value("theta", cfg.theta);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.t_point = j.value("t", cfg.t_point);
    cfg.s = j.value("s", cfg.s);
    cfg.workers = j.value("workers", default_workers);
    if (j.contains("phases")) cfg.phases = phases_from_json(j.at("phases"));
    cfg.cramer_b = j.value("b", cfg.cramer_b);
    cfg.cramer_C = j.value("C", cfg.cramer_C);
    cfg.cramer_R = j.value("R", cfg.cramer_R);
    cfg.cramer_tmax = j.value("tmax", cfg.cramer_tmax);
    cfg.cramer_window = j.value("window", cfg.cramer_window);

    if (cfg.trials < 1) throw std::invalid_argument("harness: trials must be >= 1");
    if (!(cfg.lo < cfg.hi)) throw std::invalid_argument("harness: interval requires lo < hi");
    if (!(cfg.r > 1.2 && cfg.r < 1.5))
        throw std::invalid_argument("harness: r must lie in (1.2, 1.5)");
    if (cfg.n_list.empty()) throw std::invalid_argument("harness: empty n list");
    for (const long n : cfg.n_list)
        if (n < 1) throw std::invalid_argument("harness: n must be >= 1");
    return cfg;
}

json report_to_json(const ExperimentReport& rep) {
    json rows = json::array();
    for (const ReportRow& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"trials", r.trials},
                        {"mean", r.mean},
                        {"std_error", r.std_error},
                        {"mean_over_n", r.mean_over_n},
                        {"reference", r.reference},
                        {"certified_fraction", r.certified_fraction}});
    json j = {{"kind", kind_name(rep.kind)},
              {"law", rep.law_id},
              {"rows", rows},
              {"seed", rep.seed},
              {"config_hash", rep.config_hash},
              {"version", rep.version},
              {"flagged", rep.flagged}};
    if (!rep.note.empty()) j["note"] = rep.note;
    if (!rep.extra.is_null()) j["extra"] = rep.extra;
    return j;
}

std::string report_csv(const ExperimentReport& rep) {
    std::string out;
    auto line = [&out](std::initializer_list<std::string> cells) {
        bool first = true;
        for (const std::string& c : cells) {
            if (!first) out += ',';
            out += c;
            first = false;
        }
        out += '\n';
    };
    switch (rep.kind) {
    case ExperimentKind::Universality:
        line({"n", "trials", "mean_count", "std_error", "mean_over_n", "gaussian_reference",
              "certified_fraction"});
        for (const ReportRow& r : rep.rows)
            line({std::to_string(r.n), std::to_string(r.trials), fmt(r.mean),
                  fmt(r.std_error), fmt(r.mean_over_n), fmt(r.reference),
                  fmt(r.certified_fraction)});
        break;
    case ExperimentKind::Threshold:
        line({"n", "trials", "freq_below", "std_error", "tau", "certified_fraction"});
        for (const ReportRow& r : rep.rows)
            line({std::to_string(r.n), std::to_string(r.trials), fmt(r.mean),
                  fmt(r.std_error), fmt(r.reference), fmt(r.certified_fraction)});
        break;
    case ExperimentKind::SmallBall:
        line({"n", "gamma", "trials", "hits", "estimate", "std_error"});
        for (const ReportRow& r : rep.rows)
            line({std::to_string(r.n), fmt(rep.extra.value("gamma", 0.0)),
                  std::to_string(r.trials),
                  std::to_string(static_cast<long>(std::llround(r.mean * r.trials))),
                  fmt(r.mean), fmt(r.std_error)});
        break;
    case ExperimentKind::Cramer: {
        line({"window_center", "sup_abs_phi", "argmax_t"});
        const json& env = rep.extra.at("envelope");
        const auto& centers = env.at("centers");
        const auto& sups = env.at("sup_abs_phi");
        const auto& args = env.at("argmax_t");
        for (size_t i = 0; i < centers.size(); ++i)
            line({fmt(centers[i].get<double>()), fmt(sups[i].get<double>()),
                  fmt(args[i].get<double>())});
        break;
    }
    case ExperimentKind::Edgeworth:
        line({"n", "x", "oracle", "gaussian", "edgeworth"});
        for (const json& g : rep.extra.at("grid"))
            line({std::to_string(g.at("n").get<long>()), fmt(g.at("x").get<double>()),
                  fmt(g.at("oracle").get<double>()), fmt(g.at("gaussian").get<double>()),
                  fmt(g.at("edgeworth").get<double>())});
        break;
    }
    return out;
}

SuiteResult run_suite(const json& config, const std::string& out_dir) {
    SuiteResult result;
    const std::uint64_t seed = config.value("seed", 1ULL);
    const int workers = config.value("workers", 1);
    std::filesystem::create_directories(out_dir);

    json reports = json::array();
    const json experiments = config.value("experiments", json::array());
    int idx = 0;
    for (const json& exp : experiments) {
        const ExperimentConfig cfg = config_from_json(exp, seed, workers);
        ExperimentReport rep = run_experiment(cfg);
        char name[64];
        std::snprintf(name, sizeof name, "%03d_%s.csv", idx, kind_name(cfg.kind).c_str());
        const std::string path = out_dir + "/" + name;
        std::ofstream csv(path, std::ios::binary);
        csv << report_csv(rep);
        csv.close();
        result.csv_paths.push_back(path);
        result.flagged = result.flagged || rep.flagged;
        reports.push_back(report_to_json(rep));
        result.reports.push_back(std::move(rep));
        ++idx;
    }

    const json summary = {{"version", kVersion},
                          {"seed", seed},
                          {"config_hash", config_hash_hex(config)},
                          {"reports", reports}};
    std::ofstream js(out_dir + "/report.json", std::ios::binary);
    js << summary.dump(2) << "\n";
    return result;
}

} // namespace rtpz::harness
