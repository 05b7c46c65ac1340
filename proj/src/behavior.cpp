#include "uavnet/behavior.hpp"

#include <cmath>

namespace uavnet {

void BehaviorGains::validate() const {
    for (double g : {a_m2g, b_m2g, a_ath, b_ath, a_adr, b_adr}) {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw std::invalid_argument("behavior: every gain must be strictly positive");
        }
    }
}

MoveToTarget v_move_to_target(const UavState& state, Vec3 target) {
    const Vec3 delta = target - state.position;
    const double d = delta.norm();
    if (d == 0.0) {
        return {{}, 0.0};
    }
    return {delta / d, d};
}

double gain_m2g(double d, const BehaviorGains& g) { return d >= g.b_m2g ? g.a_m2g : g.a_m2g * d / g.b_m2g; }

double gain_ath(double d, const BehaviorGains& g) { return d >= g.b_ath ? 0.0 : g.a_ath * (1.0 - d / g.b_ath); }

double gain_adr(double d, const BehaviorGains& g) { return d >= g.b_adr ? 0.0 : g.a_adr * (1.0 - d / g.b_adr); }

namespace {

// Quarter turn of a horizontal vector, counter-clockwise for side = +1.
Vec3 quarter_turn(Vec2 v, double side) { return {-side * v.y, side * v.x, 0.0}; }

// Sign of rho = bx sin(psi) - by cos(psi); rho > 0 means b lies clockwise of the heading.
// A bearing dead ahead (rho == 0) turns counter-clockwise.
double turn_side(Vec2 bearing, double heading) {
    const double rho = bearing.x * std::sin(heading) - bearing.y * std::cos(heading);
    constexpr double kDeadAhead = 1e-12;
    return rho < -kDeadAhead * bearing.norm() ? -1.0 : 1.0;
}

} // namespace

Vec3 v_avoid_obstacle(const UavState& state, Vec2 obstacle_center, double d_ath) {
    if (!(d_ath > 0.0)) {
        throw DomainError("obstacle avoidance undefined at zero distance");
    }
    const Vec2 toward = (1.0 / d_ath) * (obstacle_center - state.position.xy());
    return quarter_turn(toward, turn_side(toward, state.heading));
}

Vec3 v_avoid_uav(const UavState& state, Vec3 other, double d_adr) {
    if (!(d_adr > 0.0)) {
        throw DomainError("UAV avoidance undefined at zero distance");
    }
    return (state.position - other) / d_adr;
}

Vec3 v_sidestep_uav(const UavState& state, Vec3 other) {
    const Vec2 toward = other.xy() - state.position.xy();
    const double n = toward.norm();
    if (n == 0.0) {
        return {};
    }
    const Vec2 unit = (1.0 / n) * toward;
    return quarter_turn(unit, turn_side(unit, state.heading));
}

Vec3 compose_velocity(const BehaviorInputs& in, const BehaviorGains& gains, const UavParams& params) {
    const MoveToTarget m2g = v_move_to_target(in.self, in.target);
    Vec3 v = gain_m2g(m2g.distance, gains) * m2g.direction;

    if (in.nearest_obstacle) {
        const auto& o = *in.nearest_obstacle;
        const double f = gain_ath(o.distance, gains);
        // Only an obstacle between the UAV and its target needs a detour.
        const Vec2 bearing = o.center - in.self.position.xy();
        const bool in_the_way =
            o.distance < m2g.distance && m2g.direction.x * bearing.x + m2g.direction.y * bearing.y > 0.0;
        if (f > 0.0 && in_the_way) {
            // Already touching the disk still needs a finite push out.
            v += f * v_avoid_obstacle(in.self, o.center, std::max(o.distance, 1e-6));
        }
    }
    if (in.nearest_uav) {
        const auto& n = *in.nearest_uav;
        const double f = gain_adr(n.distance, gains);
        if (f > 0.0 && n.distance > 0.0) {
            v += f * (v_avoid_uav(in.self, n.position, n.distance) + v_sidestep_uav(in.self, n.position));
        }
    }
    if (in.altitude_floor) {
        // Engage half a body size above the floor so a waypoint placed on the floor stays reachable.
        const double deficit = *in.altitude_floor + 0.5 * params.size_d - in.self.position.z;
        if (deficit > 0.0) {
            v.z = std::max(v.z, 0.0) + (gains.a_m2g / gains.b_m2g) * deficit;
            // Climb first: the horizontal part gets whatever speed budget is left.
            const double vz = std::min(v.z, params.max_speed);
            const double room = std::sqrt(params.max_speed * params.max_speed - vz * vz);
            const Vec3 horizontal = clamp_speed({v.x, v.y, 0.0}, room);
            return {horizontal.x, horizontal.y, vz};
        }
    }
    return clamp_speed(v, params.max_speed);
}

} // namespace uavnet
