#include "uavnet/fitness.hpp"

#include <cmath>

namespace uavnet {

Cost::Cost(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0) {
        throw DomainError("cost must be a non-negative number");
    }
}

void FitnessWeights::validate() const {
    for (double b : {b1, b2, b3, b4}) {
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw std::invalid_argument("weights: every b_k must be finite and >= 0");
        }
    }
    if (b1 == 0.0 && b2 == 0.0 && b3 == 0.0 && b4 == 0.0) {
        throw std::invalid_argument("weights: at least one b_k must be positive");
    }
}

namespace {

Cost disk_penalty(Vec2 p, Vec2 center, double radius, const UavParams& params) {
    const double d = (p - center).norm();
    const double collide = radius + params.size_d;
    const double clear = collide + params.safe_margin;
    if (d <= collide) {
        return Cost::infinite();
    }
    if (d <= clear) {
        return Cost(clear - d);
    }
    return Cost::zero();
}

} // namespace

Cost f1_obstacle(Vec3 candidate, const std::vector<Obstacle>& obstacles, const UavParams& params) {
    Cost total;
    for (const auto& o : obstacles) {
        if (!o.spans(candidate.z)) {
            continue;
        }
        total = total + disk_penalty(candidate.xy(), o.center, o.radius, params);
        if (total.is_infinite()) {
            break;
        }
    }
    return total;
}

Cost f1_obstacle(Vec3 candidate, const std::vector<Disk>& disks, const UavParams& params) {
    Cost total;
    for (const auto& d : disks) {
        total = total + disk_penalty(candidate.xy(), d.center, d.radius, params);
    }
    return total;
}

Cost f2_target_angle(Vec3 current, Vec3 candidate, Vec3 target) {
    const Vec3 step = candidate - current;
    const Vec3 los = target - current;
    if (step.squared_norm() == 0.0 || los.squared_norm() == 0.0) {
        throw DomainError("target angle undefined for zero-length vector");
    }
    return Cost(angle_between(step, los));
}

Cost f3_sensing(Vec3 current, Vec3 candidate, double sense_range) {
    const double r = distance(current, candidate);
    return r <= sense_range ? Cost(std::abs(sense_range - r)) : Cost::infinite();
}

Cost f4_communication(Vec3 previous_node, Vec3 candidate, double comm_range) {
    const double c = distance(previous_node, candidate);
    return c <= comm_range ? Cost(std::abs(comm_range - c)) : Cost::infinite();
}

bool satisfies_clearance(Vec3 candidate, const Environment& env, double altitude_min) {
    if (!env.bounds().contains(candidate) || !env.terrain().covers(candidate.xy())) {
        return false;
    }
    return candidate.z >= env.ground_height(candidate.xy()) + altitude_min;
}

Cost total_fitness(Vec3 candidate, const FitnessContext& ctx, const Environment& env) {
    if (!satisfies_clearance(candidate, env, ctx.params.altitude_min)) {
        return Cost::infinite();
    }
    const auto& w = ctx.weights;
    Cost total = weighted(w.b1, f1_obstacle(candidate, ctx.obstacles, ctx.params));
    if (total.is_infinite()) {
        return total;
    }
    total = total + weighted(w.b3, f3_sensing(ctx.current, candidate, ctx.params.sense_range));
    total = total + weighted(w.b4, f4_communication(ctx.previous_node, candidate, ctx.params.comm_range));
    if (total.is_infinite() || w.b2 == 0.0) {
        return total;
    }
    // A candidate exactly at the search centre has no direction; it is never a useful step.
    if (candidate == ctx.current) {
        return Cost::infinite();
    }
    return total + weighted(w.b2, f2_target_angle(ctx.current, candidate, ctx.target));
}

} // namespace uavnet
