#pragma once

#include <string>

#include "uavnet/geometry.hpp"

namespace uavnet {

/// Physical parameters of one relay UAV. Defaults: D = 1 m, S = 10 D,
/// R_C = 300 m, R_S = 50 m, 15 m/s cruise. altitude_min is a configurable
/// stand-in for "a suitable altitude above the ground".
struct UavParams {
    double size_d = 1.0;
    double safe_margin = 10.0;
    double comm_range = 300.0;
    double sense_range = 50.0;
    double max_speed = 15.0;
    double altitude_min = 2.0;

    void validate() const;
};

struct UavState {
    int id = 0;
    Vec3 position;
    double heading = 0.0; ///< (-pi, pi]
    Vec3 velocity;
};

/// Particle kinematics: P' = P + V T, psi' = atan2(vy, vx); psi is held when V has no
/// horizontal component.
UavState step(const UavState& state, Vec3 v_cmd, double dt);

/// Scales v down to max_speed if it is longer, direction preserved.
Vec3 clamp_speed(Vec3 v, double max_speed);

} // namespace uavnet
