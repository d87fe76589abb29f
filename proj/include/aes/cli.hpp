#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "aes/tcacs.hpp"

namespace aes {

// Subcommand entry points. Exit codes: 0 success, 1 usage error, 2 runtime
// error. The thin CLI front end maps parsed flags onto these.

inline constexpr const char* kToolName = "aes-swarm";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
    int setup = 0;                    // 1..3, or 0 when a config file is given
    std::string config_path;          // mutually exclusive with setup
    uint64_t seed = 0;
    std::string out_dir = "out";
    int stride = 1;
};

struct OptimizeOptions {
    std::string config_path;          // empty: built-in setup 3 settings
    int budget = 300;
    uint64_t seed = 0;
    std::string bounds_spec;          // "lo:hi,lo:hi,lo:hi"; empty: defaults
    std::string weights = "default";  // default | force | align
    std::string out_dir = "out";
};

struct MetricsOptions {
    std::string trajectory_path;
    std::string config_path;          // model config matching the run
    std::string out_dir = "out";
};

/// Default decision-variable bounds for tuning (alpha, beta, k); brackets the
/// tuned operating point with at least an order of magnitude on each side.
std::array<Interval, 3> default_tuning_bounds();

/// Simulate and write trajectory.csv, metrics.csv, forces.csv, six snapshot
/// scatter files, the resolved config, and manifest.json under out_dir.
int cmd_run(const RunOptions& opt);

/// Tune (alpha, beta, k) against the Monte-Carlo objective; write history.csv,
/// result.json, the resolved config, and manifest.json; print the tuned cost
/// against the configured parameters' cost.
int cmd_optimize(const OptimizeOptions& opt);

/// Recompute the metric time series from a stored trajectory and write
/// metrics.csv under out_dir.
int cmd_metrics(const MetricsOptions& opt);

}  // namespace aes
