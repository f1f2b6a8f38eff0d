#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nodallab/common.hpp"

namespace nodallab {

struct ExperimentConfig {
    std::string experiment;
    int n = 1000;
    double p = 0.5;
    long trials = 100;
    std::uint64_t master_seed = 42;
    double kappa = 0.25;                       // bulk index window [kappa n, n - kappa n]
    std::vector<int> edge_indices;             // default {2, ..., ceil(phi_n)}
    std::map<std::string, double> thresholds;  // named tolerances, echoed in reports
    std::map<std::string, double> params;      // extra experiment knobs
    int workers = 1;
};

struct TrialRow {
    long trial = 0;
    std::uint64_t seed = 0;
    std::vector<double> metrics;  // aligned with StatReport::metric_names
};

struct StatReport {
    ExperimentConfig config;
    std::vector<std::string> metric_names;
    std::vector<TrialRow> rows;
    std::vector<std::pair<std::string, double>> aggregates;
    std::vector<std::pair<std::string, bool>> flags;
    double wall_time_s = 0.0;

    bool all_pass() const;
    double aggregate(const std::string& name) const;
};

// Experiments: verify-bulk-balance, verify-edge-balance, two-domains,
// bhy-moments, typicality, level-repulsion, detection-consistency,
// sticking, wgw, sign-probability, signpoly-report, green-comparison.
StatReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::string> experiment_names();

// trial, seed, then the metric columns in declared order.
void emit_csv(const StatReport& rep, std::ostream& os);
// experiment, trial, metric, value rows for external plotting.
void emit_long_csv(const StatReport& rep, std::ostream& os);
// Schema-versioned JSON; wall_time is the one non-deterministic field.
void emit_json(const StatReport& rep, std::ostream& os);
std::string report_json_string(const StatReport& rep);

// Writes <out_dir>/<experiment>.{csv,json} and <experiment>_long.csv.
void emit_files(const StatReport& rep, const std::string& out_dir, const std::string& format);

// Round-trips a report emitted by emit_json and recomputes the aggregates
// from the rows.
StatReport reingest_json(std::istream& is);

// key=value lines, '#' comments; keys mirror ExperimentConfig, with
// thr.<name> and param.<name> for the maps.
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& line);

// Per-trial seed: hash of (master_seed, trial index).
std::uint64_t trial_seed(const ExperimentConfig& cfg, long trial);

struct MomentGap {
    double gap = 0.0;
    double std_err = 0.0;
    double mean = 0.0;
    double reference = 0.0;  // E f(g^2)
};

// |empirical E f(n<q,v_j>^2) - E f(g^2)| over cfg.trials independent graphs;
// q must be orthogonal to the equal-coordinates direction to 1e-10 and j is
// a 1-indexed bulk eigenvalue index.
MomentGap bhy_moment_gap(const ExperimentConfig& cfg, const std::function<double(double)>& f,
                         double ref_value, const Eigen::VectorXd& q, int j);

}  // namespace nodallab
