#pragma once

#include <map>
#include <string>

#include "json.hpp"
#include "tehomog/eigen_correction.hpp"

namespace tehomog {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration: numbers, quoted strings, booleans, and
// bracketed numeric arrays. '#' starts a comment; section headers in square
// brackets prefix the keys that follow ("[profile]\nkind = ..." reads back as
// profile.kind).
class Config {
public:
    static Config parse(const std::string& text);

    bool has(const std::string& key) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer_or(const std::string& key, long fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    std::vector<double> list(const std::string& key) const;
    std::vector<double> list_or(const std::string& key, std::vector<double> fallback) const;

private:
    std::map<std::string, std::string> raw_;
};

PeriodicIndex profile_from_config(const Config& cfg);
PeriodicIndex named_profile(const std::string& name);

struct ExperimentConfig {
    std::string id;  // E1..E8
    PeriodicIndex profile = named_profile("piecewise24");
    double tau = 10.0;              // operating tau for resolvent experiments
    double window_lo = 1.0;         // tau window for eigenvalue searches
    double window_hi = 200.0;
    std::vector<double> eps_list = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
    double delta = 0.5;             // cutoff for the eps_k = 1/(N_k + delta) sweeps
    std::vector<long> n_list = {8, 16, 32, 64};
    int points_per_period = 32;
    int base_m = 2001;
    int steps_per_cell = 32;
    double scan_step = 1e-3;
    double root_tol = 1e-12;
    std::string output_dir = "out";

    static ExperimentConfig from_config(const Config& cfg, const std::string& id);
};

struct ExperimentResult {
    std::string id;
    bool passed = false;
    bool null_case = false;  // all errors at rounding level (constant profile)
    RateStudy rates;
    nlohmann::json report;
};

// Runs one experiment, writing samples.csv, rates.json and plot.gp under
// <output_dir>/<id>/.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// All eight experiments from one config; writes report.json at the top of
// output_dir; passes only if every experiment passes.
struct SuiteResult {
    bool passed = false;
    nlohmann::json report;
};
SuiteResult run_suite(const Config& cfg, const std::string& output_dir);

// Deterministic parallel sweep helper: evaluates fn(0..count-1), possibly
// concurrently (bounded by TEHOMOG_THREADS), rethrowing the first failure.
void parallel_for(int count, const std::function<void(int)>& fn);

// First simple homogenized eigenvalue in the window.
EigRoot first_simple_homog_eigenvalue(double nbar, double lo, double hi, double scan_step,
                                      double tol);

// Grid resolving eps with the requested points per period (even interval count).
Grid grid_for_eps(double eps, int points_per_period);

nlohmann::json correction_report_json(const CorrectionReport& rep);

}  // namespace tehomog
