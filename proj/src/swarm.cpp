#include "aes/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aes {

double normalize_angle(double theta) {
    double a = std::remainder(theta, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

Vec2 heading_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

Vec2 SwarmState::centroid() const {
    Vec2 sum;
    for (const AgentState& a : agents) sum += a.position;
    return sum / static_cast<double>(agents.size());
}

SpringNetwork::SpringNetwork(std::vector<SpringLink> links, int agent_count)
    : links_(std::move(links)), adjacency_(static_cast<size_t>(agent_count)) {
    if (agent_count < 0) throw std::invalid_argument("SpringNetwork: negative agent count");
    for (const SpringLink& link : links_) {
        if (link.i < 0 || link.j < 0 || link.i >= agent_count || link.j >= agent_count)
            throw std::invalid_argument("SpringNetwork: link endpoint out of range");
        if (link.i == link.j)
            throw std::invalid_argument("SpringNetwork: self link on agent " +
                                        std::to_string(link.i));
        if (!(link.rest_length > 0.0))
            throw std::invalid_argument("SpringNetwork: non-positive rest length on link (" +
                                        std::to_string(link.i) + ", " + std::to_string(link.j) +
                                        ")");
        adjacency_[static_cast<size_t>(link.i)].emplace_back(link.j, link.rest_length);
        adjacency_[static_cast<size_t>(link.j)].emplace_back(link.i, link.rest_length);
    }
}

void ModelParams::validate() const {
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (!(k >= 0.0)) throw std::invalid_argument("k must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(D_r >= 0.0)) throw std::invalid_argument("D_r must be >= 0");
    if (!(D_theta >= 0.0)) throw std::invalid_argument("D_theta must be >= 0");
    if (!(v0 >= 0.0)) throw std::invalid_argument("v0 must be >= 0");
    if (w_l != 0.0) {
        double n = v_d_hat.norm();
        if (std::abs(n - 1.0) > 1e-9)
            throw std::invalid_argument("v_d must be a unit vector when w_l is nonzero");
    }
}

NoiseSample draw_noise(SplitMix64& stream) {
    NoiseSample s;
    s.xi_r = stream.unit_vector();
    s.xi_theta = stream.normal();
    return s;
}

CoincidentAgentsError::CoincidentAgentsError(int i, int j)
    : std::runtime_error("coincident linked agents (" + std::to_string(i) + ", " +
                         std::to_string(j) + "): spring direction undefined"),
      agent_i(i),
      agent_j(j) {}

DivergenceError::DivergenceError(int64_t s)
    : std::runtime_error("integration diverged at step " + std::to_string(s)), step(s) {}

LatticeResult build_lattice(int rows, int cols, double spacing, double pos_jitter,
                            HeadingMode heading_mode, double theta0, SplitMix64& rng,
                            double link_radius_mult) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("lattice needs rows >= 1, cols >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be > 0");
    if (pos_jitter < 0.0) throw std::invalid_argument("position jitter must be >= 0");
    if (!(link_radius_mult > 0.0)) throw std::invalid_argument("link radius must be > 0");

    SwarmState state;
    state.agents.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            AgentState a;
            double dx = pos_jitter * (2.0 * rng.next_double() - 1.0);
            double dy = pos_jitter * (2.0 * rng.next_double() - 1.0);
            a.position = {c * spacing + dx, r * spacing + dy};
            a.heading = heading_mode == HeadingMode::random ? rng.uniform_angle()
                                                            : normalize_angle(theta0);
            state.agents.push_back(a);
        }
    }

    // Link by unperturbed grid distance; rest lengths from the perturbed
    // positions.
    const double mult_sq = link_radius_mult * link_radius_mult;
    std::vector<SpringLink> links;
    const int n = rows * cols;
    for (int a = 0; a < n; ++a) {
        int ra = a / cols, ca = a % cols;
        for (int b = a + 1; b < n; ++b) {
            int rb = b / cols, cb = b % cols;
            double grid_sq = static_cast<double>((ra - rb) * (ra - rb) + (ca - cb) * (ca - cb));
            if (grid_sq <= mult_sq) {
                double rest = (state.agents[static_cast<size_t>(b)].position -
                               state.agents[static_cast<size_t>(a)].position)
                                  .norm();
                links.push_back({a, b, rest});
            }
        }
    }
    return {std::move(state), SpringNetwork(std::move(links), n)};
}

Vec2 spring_force(const SwarmState& state, const SpringNetwork& net, int i, double k,
                  SignConvention convention) {
    Vec2 force;
    const Vec2 xi = state.agents[static_cast<size_t>(i)].position;
    for (const auto& [j, rest] : net.neighbors(i)) {
        Vec2 r = state.agents[static_cast<size_t>(j)].position - xi;
        double dist = r.norm();
        if (dist == 0.0) throw CoincidentAgentsError(std::min(i, j), std::max(i, j));
        double magnitude = (k / rest) * (dist - rest);
        force += (magnitude / dist) * r;
    }
    if (convention == SignConvention::literal_paper) force = -force;
    return force;
}

Vec2 aux_linear_force(double w_l, const Vec2& v_d_hat) { return w_l * v_d_hat; }

Vec2 aux_rotational_force(double w_r, double omega, const Vec2& x_i, const Vec2& x_c) {
    Vec2 r = x_i - x_c;
    return {w_r * omega * r.y, -w_r * omega * r.x};
}

Vec2 total_force(const SwarmState& state, const SpringNetwork& net, const ModelParams& params,
                 int i) {
    Vec2 center = params.rotation_center_mode == RotationCenterMode::swarm_centroid
                      ? state.centroid()
                      : params.rotation_center;
    return spring_force(state, net, i, params.k, params.sign_convention) +
           aux_linear_force(params.w_l, params.v_d_hat) +
           aux_rotational_force(params.w_r, params.omega,
                                state.agents[static_cast<size_t>(i)].position, center);
}

Forces compute_forces(const SwarmState& state, const SpringNetwork& net,
                      const ModelParams& params) {
    const size_t n = state.agents.size();
    Forces f;
    f.spring.assign(n, Vec2{});
    f.total.assign(n, Vec2{});

    // One pass over links, scattered to both endpoints (restoring sign).
    for (const SpringLink& link : net.links()) {
        Vec2 r = state.agents[static_cast<size_t>(link.j)].position -
                 state.agents[static_cast<size_t>(link.i)].position;
        double dist = r.norm();
        if (dist == 0.0) throw CoincidentAgentsError(link.i, link.j);
        Vec2 contrib = ((params.k / link.rest_length) * (dist - link.rest_length) / dist) * r;
        f.spring[static_cast<size_t>(link.i)] += contrib;
        f.spring[static_cast<size_t>(link.j)] -= contrib;
    }
    if (params.sign_convention == SignConvention::literal_paper)
        for (Vec2& v : f.spring) v = -v;

    Vec2 drive = aux_linear_force(params.w_l, params.v_d_hat);
    Vec2 center = params.rotation_center_mode == RotationCenterMode::swarm_centroid
                      ? state.centroid()
                      : params.rotation_center;
    for (size_t i = 0; i < n; ++i) {
        f.total[i] = f.spring[i] + drive +
                     aux_rotational_force(params.w_r, params.omega, state.agents[i].position,
                                          center);
    }
    return f;
}

SwarmState apply_step(const SwarmState& state, std::span<const Vec2> total_forces,
                      const ModelParams& params, const SimRng& rng) {
    SwarmState next;
    next.agents.resize(state.agents.size());
    next.step_index = state.step_index + 1;
    next.time = static_cast<double>(next.step_index) * params.dt;

    const double noise_r = noise_amplitude(params.D_r, params.dt);
    const double noise_theta = noise_amplitude(params.D_theta, params.dt);

    for (size_t i = 0; i < state.agents.size(); ++i) {
        SplitMix64 stream = rng.agent_stream(static_cast<int>(i), state.step_index);
        NoiseSample noise = draw_noise(stream);

        const AgentState& a = state.agents[i];
        Vec2 n_hat = heading_vector(a.heading);
        Vec2 g = total_forces[i] + noise_r * noise.xi_r;

        double forward = params.v0 + params.alpha * g.dot(n_hat);
        double turn = params.beta * g.dot(n_hat.perp()) + noise_theta * noise.xi_theta;

        AgentState& out = next.agents[i];
        out.position = a.position + (forward * params.dt) * n_hat;
        out.heading = normalize_angle(a.heading + turn * params.dt);
        if (!out.position.finite() || !std::isfinite(out.heading))
            throw DivergenceError(next.step_index);
    }
    return next;
}

SwarmState step(const SwarmState& state, const SpringNetwork& net, const ModelParams& params,
                const SimRng& rng) {
    Forces f = compute_forces(state, net, params);
    return apply_step(state, f.total, params, rng);
}

}  // namespace aes
