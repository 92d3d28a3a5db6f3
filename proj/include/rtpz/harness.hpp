#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtpz/distributions.hpp"
#include "rtpz/trigpoly.hpp"
#include "rtpz/zeros.hpp"

namespace rtpz::harness {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { Universality, Threshold, SmallBall, Cramer, Edgeworth };

std::string kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Universality;
    dist::CoefficientLaw law = dist::CoefficientLaw::gaussian(0.0, 1.0);
    std::vector<long> n_list = {50};
    double lo = 0.0;
    double hi = 2.0 * 3.14159265358979323846;
    long trials = 100;
    std::uint64_t seed = 1;
    double r = 1.3;        // Kac-Rice width exponent, delta <= n^-r
    double theta = -1.25;  // threshold experiment exponent
    double gamma = 0.6;    // small-ball radius exponent
    double t_point = 1.0;  // small-ball evaluation angle
    int s = 3;             // Edgeworth order
    poly::PhasePolicy phases = poly::PhasePolicy::zero();
    int workers = 1;
    // cramer probe parameters
    double cramer_b = 1.0;
    double cramer_C = 0.1;
    double cramer_R = 1.0;
    double cramer_tmax = 100.0;
    double cramer_window = 2.0;
};

struct ReportRow {
    long n = 0;
    long trials = 0;
    double mean = 0.0;      // mean count, or frequency / estimate per kind
    double std_error = 0.0; // sample std / sqrt(trials)
    double mean_over_n = 0.0;
    double reference = 0.0; // closed-form reference for the same row
    double certified_fraction = 0.0;
};

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::Universality;
    std::string law_id;
    std::vector<ReportRow> rows;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version = kVersion;
    bool flagged = false; // > 1% uncertified trials, or kind-specific failure
    std::string note;
    nlohmann::json extra; // kind-specific payload (certificates, distances)
};

// One certified zero count of a sampled polynomial over [lo, hi] (argument of
// the normalized polynomial; counting runs on the rescaled axis [n lo, n hi]).
// Pipeline: adaptive threshold certificate of the trial's own omega, then
// delta = min(delta_max/2, n^-r), Kac-Rice structural count cross-checked
// against the certified sign-change count.
struct TrialCount {
    long count = 0;
    bool certified = false;
    double omega_lower = 0.0;
    double delta = 0.0;
};
TrialCount count_zeros_certified(const poly::TrigPolynomial& p, double lo, double hi,
                                 double r, int resolution_scale = 1);

// Per-trial polynomial of an experiment: coefficients from
// seed_stream(config.seed, n, trial); uniform-random phase policies are
// re-seeded per trial so trials stay independent.
poly::TrigPolynomial trial_polynomial(const ExperimentConfig& config, long n, long trial);

ExperimentReport run_universality(const ExperimentConfig& config);
ExperimentReport run_threshold(const ExperimentConfig& config);
ExperimentReport run_smallball(const ExperimentConfig& config);
ExperimentReport run_cramer(const ExperimentConfig& config);
ExperimentReport run_edgeworth(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

// JSON plumbing.  Experiment objects: {"kind": "...", "law": <law JSON or
// shorthand string>, "n": [..], "interval": [lo, hi], "trials": ...,
// "r"/"theta"/"gamma"/"t"/"s", "phases": "zero"|"uniform"|{...}}.
ExperimentConfig config_from_json(const nlohmann::json& j, std::uint64_t default_seed,
                                  int default_workers);
nlohmann::json report_to_json(const ExperimentReport& report);
std::string report_csv(const ExperimentReport& report);

struct SuiteResult {
    std::vector<ExperimentReport> reports;
    std::vector<std::string> csv_paths;
    bool flagged = false;
};

// Runs {"seed": ..., "workers": ..., "experiments": [...]} and writes one CSV
// per experiment plus report.json under out_dir.  Identical config and seed
// give byte-identical CSV for any worker count.
SuiteResult run_suite(const nlohmann::json& config, const std::string& out_dir);

std::uint64_t fnv1a(const std::string& bytes);
std::string config_hash_hex(const nlohmann::json& config);

} // namespace rtpz::harness
