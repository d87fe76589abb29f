#include "aes/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace aes {

int ScenarioConfig::step_count() const {
    double ratio = t_f / params.dt;
    return static_cast<int>(std::llround(ratio));
}

void ScenarioConfig::validate() const {
    params.validate();
    if (lattice.rows < 1 || lattice.cols < 1)
        throw std::invalid_argument("lattice needs rows >= 1 and cols >= 1");
    if (!(lattice.d_init > 0.0)) throw std::invalid_argument("d_init must be > 0");
    if (lattice.jitter < 0.0) throw std::invalid_argument("jitter must be >= 0");
    if (!(t_f > 0.0)) throw std::invalid_argument("tf must be > 0");
    if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
    if (!(params.v0 > 0.0)) throw std::invalid_argument("v0 must be > 0 for the order parameters");
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
    double ratio = t_f / params.dt;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("tf must be an integral multiple of dt");
}

std::vector<Vec2> agent_velocities(const SwarmState& state, std::span<const Vec2> total_forces,
                                   const ModelParams& params) {
    std::vector<Vec2> v(state.agents.size());
    for (size_t i = 0; i < state.agents.size(); ++i) {
        Vec2 n_hat = heading_vector(state.agents[i].heading);
        v[i] = (params.v0 + params.alpha * total_forces[i].dot(n_hat)) * n_hat;
    }
    return v;
}

MetricsRecord make_metrics_record(const SwarmState& state, const Forces& forces,
                                  const ModelParams& params, double eps) {
    MetricsRecord rec;
    rec.time = state.time;

    const size_t n = state.agents.size();
    Vec2 velocity_sum;
    Vec2 heading_sum;
    double control_sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        Vec2 n_hat = heading_vector(state.agents[i].heading);
        heading_sum += n_hat;
        velocity_sum += (params.v0 + params.alpha * forces.total[i].dot(n_hat)) * n_hat;

        double total_norm = forces.total[i].norm();
        rec.total_force_norm += total_norm;
        rec.spring_force_norm += forces.spring[i].norm();
        if (total_norm < eps) {
            control_sum += 1.0;
            ++rec.zero_force_agents;
        } else {
            control_sum += std::abs(forces.total[i].dot(n_hat)) / total_norm;
        }
    }
    rec.psi_velocity = velocity_sum.norm() / (static_cast<double>(n) * params.v0);
    rec.psi_heading = heading_sum.norm() / static_cast<double>(n);
    rec.psi_control = control_sum / static_cast<double>(n);
    return rec;
}

Trajectory run_scenario(const ScenarioConfig& config, uint64_t seed, int stride) {
    config.validate();
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");

    Trajectory traj;
    traj.config = config;
    traj.seed = seed;
    traj.stride = stride;

    SimRng rng{seed};
    SplitMix64 init = rng.init_stream();
    auto [state, net] =
        build_lattice(config.lattice.rows, config.lattice.cols, config.lattice.d_init,
                      config.lattice.jitter, config.lattice.heading_mode, config.lattice.theta0,
                      init, config.lattice.link_radius_mult);

    const int steps = config.step_count();
    traj.metrics.reserve(static_cast<size_t>(steps) + 1);
    traj.snapshots.reserve(static_cast<size_t>(steps / stride) + 1);

    Forces forces = compute_forces(state, net, config.params);
    traj.metrics.push_back(make_metrics_record(state, forces, config.params, config.eps));
    traj.snapshots.push_back(state);

    for (int k = 1; k <= steps; ++k) {
        state = apply_step(state, forces.total, config.params, rng);
        forces = compute_forces(state, net, config.params);
        traj.metrics.push_back(make_metrics_record(state, forces, config.params, config.eps));
        if (k % stride == 0) traj.snapshots.push_back(state);
    }
    return traj;
}

namespace {

// Lean accumulation of one replicate's objective sum; no snapshot storage.
double objective_single_run(const ScenarioConfig& config, uint64_t run_seed) {
    SimRng rng{run_seed};
    SplitMix64 init = rng.init_stream();
    auto [state, net] =
        build_lattice(config.lattice.rows, config.lattice.cols, config.lattice.d_init,
                      config.lattice.jitter, config.lattice.heading_mode, config.lattice.theta0,
                      init, config.lattice.link_radius_mult);

    const int steps = config.step_count();
    double sum = 0.0;
    Forces forces = compute_forces(state, net, config.params);
    MetricsRecord rec = make_metrics_record(state, forces, config.params, config.eps);
    sum += config.w1 * rec.total_force_norm + config.w2 * rec.psi_control;
    for (int k = 1; k <= steps; ++k) {
        state = apply_step(state, forces.total, config.params, rng);
        forces = compute_forces(state, net, config.params);
        rec = make_metrics_record(state, forces, config.params, config.eps);
        sum += config.w1 * rec.total_force_norm + config.w2 * rec.psi_control;
    }
    return sum;
}

}  // namespace

double evaluate_objective(const std::array<double, 3>& decision, const ScenarioConfig& config) {
    ScenarioConfig probe = config;
    probe.params.alpha = decision[0];
    probe.params.beta = decision[1];
    probe.params.k = decision[2];
    probe.validate();

    std::vector<double> replicate(static_cast<size_t>(probe.n_mc), 0.0);
    std::vector<unsigned char> failed(static_cast<size_t>(probe.n_mc), 0);

#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < probe.n_mc; ++m) {
        uint64_t run_seed = derive_seed(probe.seed, kDomainReplicate, static_cast<uint64_t>(m));
        try {
            replicate[static_cast<size_t>(m)] = objective_single_run(probe, run_seed);
        } catch (const std::runtime_error&) {
            failed[static_cast<size_t>(m)] = 1;
        }
    }

    for (int m = 0; m < probe.n_mc; ++m) {
        if (failed[static_cast<size_t>(m)]) {
            std::fprintf(stderr,
                         "[objective] replicate %d diverged (alpha=%g beta=%g k=%g); "
                         "returning penalty\n",
                         m, decision[0], decision[1], decision[2]);
            return kDivergedPenalty;
        }
    }

    // Replicate-index order keeps the reduction bit-deterministic.
    double total = 0.0;
    for (int m = 0; m < probe.n_mc; ++m) total += replicate[static_cast<size_t>(m)];
    return total / static_cast<double>(probe.n_mc);
}

std::string format_sig9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, int stride) {
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    out << "t,id,x,y,theta\n";
    for (const SwarmState& state : traj.snapshots) {
        if (state.step_index % (static_cast<int64_t>(traj.stride) * stride) != 0) continue;
        for (size_t i = 0; i < state.agents.size(); ++i) {
            const AgentState& a = state.agents[i];
            out << format_sig9(state.time) << ',' << i << ',' << format_sig9(a.position.x) << ','
                << format_sig9(a.position.y) << ',' << format_sig9(a.heading) << '\n';
        }
    }
}

void write_metrics_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,psi_velocity,psi_heading,psi_control,total_force\n";
    for (const MetricsRecord& rec : traj.metrics) {
        out << format_sig9(rec.time) << ',' << format_sig9(rec.psi_velocity) << ','
            << format_sig9(rec.psi_heading) << ',' << format_sig9(rec.psi_control) << ','
            << format_sig9(rec.total_force_norm) << '\n';
    }
}

void write_forces_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,spring_force,total_force\n";
    for (const MetricsRecord& rec : traj.metrics) {
        out << format_sig9(rec.time) << ',' << format_sig9(rec.spring_force_norm) << ','
            << format_sig9(rec.total_force_norm) << '\n';
    }
}

}  // namespace aes
