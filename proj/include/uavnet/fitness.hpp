#pragma once

#include <compare>
#include <limits>
#include <vector>

#include "uavnet/environment.hpp"
#include "uavnet/vehicle.hpp"

namespace uavnet {

/// Non-negative cost with a +infinity sentinel that orders above every finite value.
class Cost {
  public:
    constexpr Cost() = default;
    explicit Cost(double v);

    static constexpr Cost infinite() { return Cost(Raw{}, std::numeric_limits<double>::infinity()); }
    static constexpr Cost zero() { return Cost(); }

    constexpr double value() const { return value_; }
    constexpr bool is_infinite() const { return value_ == std::numeric_limits<double>::infinity(); }
    constexpr bool is_finite() const { return !is_infinite(); }

    friend constexpr auto operator<=>(Cost a, Cost b) { return a.value_ <=> b.value_; }
    friend constexpr bool operator==(Cost a, Cost b) { return a.value_ == b.value_; }
    friend Cost operator+(Cost a, Cost b) { return a.is_infinite() || b.is_infinite() ? infinite() : Cost(a.value_ + b.value_); }

    /// weight * cost, with 0 * inf = 0: a disabled term never contributes.
    friend Cost weighted(double weight, Cost c) {
        if (weight == 0.0) {
            return zero();
        }
        return c.is_infinite() ? infinite() : Cost(weight * c.value_);
    }

  private:
    struct Raw {};
    constexpr Cost(Raw, double v) : value_(v) {}
    double value_ = 0.0;
};

struct FitnessWeights {
    double b1 = 1.0; ///< obstacle avoidance
    double b2 = 1.0; ///< target angle
    double b3 = 1.0; ///< sensing-range step
    double b4 = 1.0; ///< communication link

    void validate() const;
};

/// Everything needed to score a candidate next position. Frozen for one optimizer call.
struct FitnessContext {
    Vec3 current;       ///< UAV's current (search-centre) position
    Vec3 previous_node; ///< adjacent node the candidate must stay linked to
    Vec3 target;        ///< destination E
    std::vector<Obstacle> obstacles;
    UavParams params;
    FitnessWeights weights;
};

/// Sum over obstacles spanning candidate.z of: 0 beyond R+D+S, R+D+S-d inside the margin band,
/// infinite at or inside R+D (d is horizontal centre distance).
Cost f1_obstacle(Vec3 candidate, const std::vector<Obstacle>& obstacles, const UavParams& params);

/// Same penalty over a list of disks that are already known to be at the candidate's altitude.
Cost f1_obstacle(Vec3 candidate, const std::vector<Disk>& disks, const UavParams& params);

/// Angle in [0, pi] between (candidate - current) and (target - current).
/// Throws DomainError if either vector has zero length.
Cost f2_target_angle(Vec3 current, Vec3 candidate, Vec3 target);

Cost f3_sensing(Vec3 current, Vec3 candidate, double sense_range);

Cost f4_communication(Vec3 previous_node, Vec3 candidate, double comm_range);

/// Hard constraints: inside world bounds, over the terrain, at least altitude_min above ground.
bool satisfies_clearance(Vec3 candidate, const Environment& env, double altitude_min);

/// b1 F1 + b2 F2 + b3 F3 + b4 F4, or infinity when the hard clearance constraint fails.
Cost total_fitness(Vec3 candidate, const FitnessContext& ctx, const Environment& env);

} // namespace uavnet
