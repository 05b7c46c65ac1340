#pragma once

#include <optional>

#include "uavnet/vehicle.hpp"

namespace uavnet {

struct BehaviorGains {
    double a_m2g = 30.0;
    double b_m2g = 20.0;
    double a_ath = 30.0;
    double b_ath = 15.0;
    double a_adr = 30.0;
    double b_adr = 20.0;

    void validate() const;
};

/// Obstacle cross-section seen at the UAV's altitude. `distance` is the horizontal clearance
/// between the UAV hull (radius D) and the disk boundary: |p - center| - radius - D.
struct ObstacleSighting {
    Vec2 center;
    double radius = 0.0;
    double distance = 0.0;
};

struct NeighborSighting {
    Vec3 position;
    double distance = 0.0;
};

struct BehaviorInputs {
    UavState self;
    Vec3 target;
    std::optional<ObstacleSighting> nearest_obstacle;
    std::optional<NeighborSighting> nearest_uav;
    /// Lowest admissible altitude (terrain + altitude_min) under and just ahead of the UAV.
    std::optional<double> altitude_floor;
};

struct MoveToTarget {
    Vec3 direction; ///< unit, or zero when already at the target
    double distance = 0.0;
};

MoveToTarget v_move_to_target(const UavState& state, Vec3 target);

double gain_m2g(double d, const BehaviorGains& gains);
double gain_ath(double d, const BehaviorGains& gains);
double gain_adr(double d, const BehaviorGains& gains);

/// Bearing to the obstacle centre scaled by 1/d_ath and turned 90 degrees in the horizontal
/// plane, toward the side that keeps a forward component along the current heading.
/// Throws DomainError when d_ath <= 0.
Vec3 v_avoid_obstacle(const UavState& state, Vec2 obstacle_center, double d_ath);

/// Unit vector pointing away from the other UAV. Throws DomainError when d_adr <= 0.
Vec3 v_avoid_uav(const UavState& state, Vec3 other, double d_adr);

/// Horizontal unit vector perpendicular to the bearing to the other UAV, on the side that keeps a
/// forward component (both UAVs of a head-on pair turn to their own left).
Vec3 v_sidestep_uav(const UavState& state, Vec3 other);

/// f_m2g V_m2g + f_ath V_ath + f_adr (V_adr + V_side) + altitude keeping, clamped to max_speed.
Vec3 compose_velocity(const BehaviorInputs& inputs, const BehaviorGains& gains, const UavParams& params);

} // namespace uavnet
