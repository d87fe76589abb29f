#pragma once

#include <span>

#include "aes/vec2.hpp"

namespace aes {

/// Order parameters and force aggregates for one snapshot.
struct MetricsRecord {
    double time = 0.0;
    double psi_velocity = 0.0;      // may exceed 1 when speeds exceed v0
    double psi_heading = 0.0;       // in [0, 1]
    double psi_control = 0.0;       // in [0, 1]
    double spring_force_norm = 0.0; // sum of |spring-only force| over agents
    double total_force_norm = 0.0;  // sum of |total force| over agents
    int zero_force_agents = 0;      // agents below eps in the psi_control sum
};

/// |sum v_i| / (N * v0). Throws std::invalid_argument when v0 <= 0 or the
/// list is empty.
double psi_velocity(std::span<const Vec2> velocities, double v0);

/// |sum n_i| / N over heading unit vectors.
double psi_heading(std::span<const double> headings);

/// Mean over agents of |f_i . n_i| / |f_i|; agents with |f_i| < eps
/// contribute 1 (no force means no correction needed).
double psi_control(std::span<const Vec2> forces, std::span<const double> headings,
                   double eps = 1e-9);

}  // namespace aes
