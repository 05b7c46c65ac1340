#include "uavnet/vehicle.hpp"

#include <cmath>

namespace uavnet {

void UavParams::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(size_d)) {
        throw std::invalid_argument("uav: size_d must be positive");
    }
    if (!positive(safe_margin)) {
        throw std::invalid_argument("uav: safe_margin must be positive");
    }
    if (!positive(max_speed)) {
        throw std::invalid_argument("uav: max_speed must be positive");
    }
    if (!positive(comm_range)) {
        throw std::invalid_argument("uav: comm_range must be positive");
    }
    if (!positive(sense_range) || !(sense_range < comm_range)) {
        throw std::invalid_argument("uav: require 0 < sense_range < comm_range");
    }
    if (!(altitude_min >= 0.0) || !std::isfinite(altitude_min)) {
        throw std::invalid_argument("uav: altitude_min must be non-negative");
    }
}

UavState step(const UavState& state, Vec3 v_cmd, double dt) {
    if (!(dt > 0.0)) {
        throw DomainError("step: dt must be positive");
    }
    if (!v_cmd.is_finite()) {
        throw DomainError("step: non-finite velocity command");
    }
    UavState next = state;
    next.position = state.position + v_cmd * dt;
    next.velocity = v_cmd;
    if (v_cmd.x != 0.0 || v_cmd.y != 0.0) {
        next.heading = wrap_angle(std::atan2(v_cmd.y, v_cmd.x));
    }
    return next;
}

Vec3 clamp_speed(Vec3 v, double max_speed) {
    const double n = v.norm();
    if (n <= max_speed) {
        return v;
    }
    return v * (max_speed / n);
}

} // namespace uavnet
