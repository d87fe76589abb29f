#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aes/rng.hpp"
#include "aes/vec2.hpp"

namespace aes {

/// Normalize an angle to (-pi, pi].
double normalize_angle(double theta);

/// Unit heading vector (cos theta, sin theta).
Vec2 heading_vector(double theta);

struct AgentState {
    Vec2 position;
    double heading = 0.0;  // radians, kept in (-pi, pi]
};

/// Positions and headings of the whole swarm at one time step. Treated as an
/// immutable snapshot: stepping produces a new value.
struct SwarmState {
    std::vector<AgentState> agents;
    double time = 0.0;  // equals step_index * dt
    int64_t step_index = 0;

    int size() const { return static_cast<int>(agents.size()); }
    Vec2 centroid() const;
};

struct SpringLink {
    int i = 0;
    int j = 0;
    double rest_length = 0.0;
};

/// Fixed undirected spring topology with per-link natural lengths.
/// Immutable once constructed.
class SpringNetwork {
public:
    SpringNetwork() = default;
    SpringNetwork(std::vector<SpringLink> links, int agent_count);

    const std::vector<SpringLink>& links() const { return links_; }
    int agent_count() const { return static_cast<int>(adjacency_.size()); }

    /// Neighbors of agent i as (agent id, rest length) pairs.
    std::span<const std::pair<int, double>> neighbors(int i) const {
        return adjacency_[static_cast<size_t>(i)];
    }

private:
    std::vector<SpringLink> links_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

enum class SignConvention {
    restoring,      // stretched links pull the agent toward the neighbor
    literal_paper,  // opposite sign; stretched links push away
};

enum class RotationCenterMode { swarm_centroid, fixed_point };

enum class HeadingMode { random, fixed };

struct ModelParams {
    double alpha = 0.066;  // force -> forward-speed gain
    double beta = 0.97;    // force -> turn-rate gain
    double k = 1.28;       // spring constant
    double v0 = 0.05;      // forward biasing speed [m/s]
    double D_r = 0.5;      // measurement noise strength
    double D_theta = 0.02; // actuation noise strength
    double dt = 0.05;      // integration step [s]

    double w_l = 0.8;           // linear drive weight
    Vec2 v_d_hat{-1.0, 0.0};    // desired direction, unit length when w_l > 0
    double w_r = 1.0;           // rotational drive weight
    double omega = 0.7;         // desired rotation rate [rad/s]
    RotationCenterMode rotation_center_mode = RotationCenterMode::swarm_centroid;
    Vec2 rotation_center;       // used in fixed_point mode

    SignConvention sign_convention = SignConvention::restoring;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct NoiseSample {
    Vec2 xi_r;             // unit vector, uniformly random orientation
    double xi_theta = 0.0; // standard normal
};

NoiseSample draw_noise(SplitMix64& stream);

/// Amplitude of the discrete-time noise force, D / sqrt(dt).
inline double noise_amplitude(double strength, double dt) { return strength / std::sqrt(dt); }

/// Run-scoped RNG handle; hands out one independent stream per consumer so
/// per-agent updates can run in any order (or in parallel) without changing
/// the trajectory.
struct SimRng {
    uint64_t seed = 0;

    SplitMix64 init_stream() const { return derive_stream(seed, kDomainInit, 0, 0); }
    SplitMix64 agent_stream(int agent, int64_t step) const {
        return derive_stream(seed, kDomainStep, static_cast<uint64_t>(agent),
                             static_cast<uint64_t>(step));
    }
};

/// Two linked agents ended up at the same position; the spring direction is
/// undefined there.
struct CoincidentAgentsError : std::runtime_error {
    CoincidentAgentsError(int i, int j);
    int agent_i;
    int agent_j;
};

/// A state component became non-finite during integration.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(int64_t step);
    int64_t step;
};

struct LatticeResult {
    SwarmState state;
    SpringNetwork network;
};

/// Build a rows x cols grid of agents at pitch `spacing`, each position
/// perturbed by an independent uniform offset in [-pos_jitter, +pos_jitter]^2.
/// Links connect every pair whose unperturbed grid distance is at most
/// link_radius_mult * spacing (the default 1.05 yields the 4-neighborhood);
/// rest lengths are the actual perturbed initial distances.
LatticeResult build_lattice(int rows, int cols, double spacing, double pos_jitter,
                            HeadingMode heading_mode, double theta0, SplitMix64& rng,
                            double link_radius_mult = 1.05);

/// Net spring force on agent i from its linked neighbors:
/// sum over j of (k / l_ij) * (|r_ij| - l_ij) * r_ij / |r_ij|, r_ij = x_j - x_i,
/// with the sign fixed by the convention.
Vec2 spring_force(const SwarmState& state, const SpringNetwork& net, int i, double k,
                  SignConvention convention);

/// Constant drive force w_l * v_d_hat, identical for every agent.
Vec2 aux_linear_force(double w_l, const Vec2& v_d_hat);

/// Per-agent rotational drive: w_r * omega * (r_y, -r_x) with r = x_i - x_c.
Vec2 aux_rotational_force(double w_r, double omega, const Vec2& x_i, const Vec2& x_c);

/// Spring force plus both drive terms. In swarm_centroid mode the rotation
/// center is the mean of all agent positions at the current step.
Vec2 total_force(const SwarmState& state, const SpringNetwork& net, const ModelParams& params,
                 int i);

/// Per-agent forces for the whole swarm at one snapshot.
struct Forces {
    std::vector<Vec2> spring;  // neighbor spring force only
    std::vector<Vec2> total;   // spring + linear drive + rotational drive
};

Forces compute_forces(const SwarmState& state, const SpringNetwork& net,
                      const ModelParams& params);

/// One synchronous Euler step: all forces are evaluated on the pre-step
/// snapshot, then every agent advances with a fresh noise sample drawn from
/// its (seed, agent, step) stream:
///   g_i     = f_i + (D_r / sqrt(dt)) * xi_r
///   x_i    += (v0 + alpha * (g_i . n_i)) * n_i * dt
///   theta_i += (beta * (g_i . n_i_perp) + (D_theta / sqrt(dt)) * xi_theta) * dt
/// Headings are re-normalized to (-pi, pi]; a non-finite result throws
/// DivergenceError.
SwarmState step(const SwarmState& state, const SpringNetwork& net, const ModelParams& params,
                const SimRng& rng);

/// Same update as `step`, with the pre-step total forces already computed.
SwarmState apply_step(const SwarmState& state, std::span<const Vec2> total_forces,
                      const ModelParams& params, const SimRng& rng);

}  // namespace aes
