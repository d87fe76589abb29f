#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aes/metrics.hpp"
#include "aes/swarm.hpp"

namespace aes {

struct LatticeSpec {
    int rows = 10;
    int cols = 10;
    double d_init = 0.2;   // grid pitch [m]
    double jitter = 0.01;  // uniform position perturbation half-width [m]
    HeadingMode heading_mode = HeadingMode::random;
    double theta0 = 0.0;   // used in fixed mode
    double link_radius_mult = 1.05;
};

struct ScenarioConfig {
    LatticeSpec lattice;
    ModelParams params;
    double t_f = 30.0;     // simulated duration [s]
    uint64_t seed = 0;
    double w1 = 0.01;      // force-sum weight in the objective
    double w2 = -1.0;      // alignment weight in the objective (negative)
    int n_mc = 10;         // Monte-Carlo replicates per objective evaluation
    double eps = 1e-9;     // zero-force tolerance for psi_control

    int agent_count() const { return lattice.rows * lattice.cols; }
    /// t_f / dt, validated to be integral.
    int step_count() const;
    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Full simulation record: strided state snapshots plus per-step metrics
/// (every step, including t = 0).
struct Trajectory {
    ScenarioConfig config;
    uint64_t seed = 0;
    int stride = 1;
    std::vector<SwarmState> snapshots;
    std::vector<MetricsRecord> metrics;
};

/// Instantaneous velocity used for the velocity order parameter:
/// (v0 + alpha * (f_i . n_i)) * n_i, the deterministic part of the update.
std::vector<Vec2> agent_velocities(const SwarmState& state, std::span<const Vec2> total_forces,
                                   const ModelParams& params);

MetricsRecord make_metrics_record(const SwarmState& state, const Forces& forces,
                                  const ModelParams& params, double eps);

/// Build the lattice and iterate the dynamics for t_f / dt steps.
/// Deterministic for a fixed seed. Snapshots are kept every `stride` steps
/// (t = 0 always included); metrics are recorded every step.
Trajectory run_scenario(const ScenarioConfig& config, uint64_t seed, int stride = 1);

/// Objective value returned for runs that diverge (or otherwise fail) so the
/// optimizer can continue past bad parameter probes.
inline constexpr double kDivergedPenalty = 1e9;

/// Monte-Carlo cost of a (alpha, beta, k) decision under the configured
/// scenario: mean over n_mc replicates of
///   sum over steps of [ w1 * sum_i |f_i| + w2 * psi_control ],
/// replicate m seeded from (config.seed, m). Lower is better.
double evaluate_objective(const std::array<double, 3>& decision, const ScenarioConfig& config);

// --- export ------------------------------------------------------------

/// Fixed 9-significant-digit decimal used by every CSV writer.
std::string format_sig9(double value);

/// Header "t,id,x,y,theta"; one row per agent per sampled step.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int stride = 1);

/// Header "t,psi_velocity,psi_heading,psi_control,total_force".
void write_metrics_csv(std::ostream& out, const Trajectory& traj);

/// Header "t,spring_force,total_force"; both force aggregates per step.
void write_forces_csv(std::ostream& out, const Trajectory& traj);

}  // namespace aes
