#pragma once

#include <cmath>

namespace aes {

/// Plain 2D double vector with the arithmetic the simulator needs.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(const Vec2& r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    constexpr double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::sqrt(x * x + y * y); }

    /// Left perpendicular (rotation by +90 degrees).
    constexpr Vec2 perp() const { return {-y, x}; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

}  // namespace aes
