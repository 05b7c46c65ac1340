#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavnet {

/// Thrown when an input lies outside the domain of an operation
/// (off-terrain query, zero-length direction, non-finite command, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;

    double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(Vec3, Vec3) = default;

    constexpr Vec3& operator+=(Vec3 o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    // sqrt of the sum of squares, not std::hypot: keeps results identical
    // to hand-written oracles in tests.
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double squared_norm() const { return x * x + y * y + z * z; }
    constexpr Vec2 xy() const { return {x, y}; }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double distance(Vec3 a, Vec3 b) { return (a - b).norm(); }
inline double horizontal_distance(Vec3 a, Vec3 b) { return (a.xy() - b.xy()).norm(); }

/// Angle between two vectors in [0, pi], robust near 0 and pi.
inline double angle_between(Vec3 a, Vec3 b) { return std::atan2(cross(a, b).norm(), dot(a, b)); }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    if (a <= -M_PI) {
        a += 2.0 * M_PI;
    }
    return a;
}

struct Box3 {
    Vec3 min;
    Vec3 max;

    bool contains(Vec3 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
    }
    bool contains_xy(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
    Vec3 clamp(Vec3 p) const;
};

inline Vec3 Box3::clamp(Vec3 p) const {
    auto c = [](double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); };
    return {c(p.x, min.x, max.x), c(p.y, min.y, max.y), c(p.z, min.z, max.z)};
}

std::string to_string(Vec3 v);

} // namespace uavnet
