#include "aes/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "aes/swarm.hpp"

namespace aes {

double psi_velocity(std::span<const Vec2> velocities, double v0) {
    if (velocities.empty()) throw std::invalid_argument("psi_velocity: empty velocity list");
    if (!(v0 > 0.0)) throw std::invalid_argument("psi_velocity: v0 must be > 0");
    Vec2 sum;
    for (const Vec2& v : velocities) sum += v;
    return sum.norm() / (static_cast<double>(velocities.size()) * v0);
}

double psi_heading(std::span<const double> headings) {
    if (headings.empty()) throw std::invalid_argument("psi_heading: empty heading list");
    Vec2 sum;
    for (double theta : headings) sum += heading_vector(theta);
    return sum.norm() / static_cast<double>(headings.size());
}

double psi_control(std::span<const Vec2> forces, std::span<const double> headings, double eps) {
    if (forces.size() != headings.size())
        throw std::invalid_argument("psi_control: list length mismatch");
    if (forces.empty()) throw std::invalid_argument("psi_control: empty input");
    double sum = 0.0;
    for (size_t i = 0; i < forces.size(); ++i) {
        double norm = forces[i].norm();
        sum += norm < eps ? 1.0 : std::abs(forces[i].dot(heading_vector(headings[i]))) / norm;
    }
    return sum / static_cast<double>(forces.size());
}

}  // namespace aes
