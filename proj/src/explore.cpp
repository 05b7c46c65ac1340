#include "uavnet/explore.hpp"

#include <chrono>
#include <cmath>

namespace uavnet {

const char* to_string(ExploreStop s) {
    switch (s) {
    case ExploreStop::None:
        return "none";
    case ExploreStop::Boundary:
        return "boundary";
    case ExploreStop::MarginRejected:
        return "margin_rejected";
    case ExploreStop::StepLimit:
        return "step_limit";
    case ExploreStop::Destination:
        return "destination";
    case ExploreStop::Blocked:
        return "blocked";
    }
    return "unknown";
}

BoundaryExplorer::BoundaryExplorer(const Environment& env, const UavParams& params, const FitnessWeights& weights,
                                   const PsoConfig& pso, const ExploreConfig& cfg, Vec3 anchor, Vec3 start,
                                   Vec3 destination, std::uint64_t master_seed, int uav_id)
    : env_(env), params_(params), weights_(weights), pso_(pso), cfg_(cfg), anchor_(anchor), current_(start),
      destination_(destination), master_seed_(master_seed), uav_id_(uav_id), final_(start) {
    if (distance(start, anchor) > params_.comm_range) {
        throw DomainError("explore: start must lie within comm_range of the anchor");
    }
    if (cfg_.max_steps == 0) {
        cfg_.max_steps = 4 * static_cast<std::size_t>(std::ceil(params_.comm_range / params_.sense_range));
    }
}

FitnessContext BoundaryExplorer::context_at(Vec3 center) const {
    FitnessContext ctx;
    ctx.current = center;
    ctx.previous_node = anchor_;
    ctx.target = destination_;
    // Every obstacle that can reach the F1 margin band of some candidate in the ball.
    ctx.obstacles = env_.obstacles_near_ball(center, params_.sense_range + params_.size_d + params_.safe_margin);
    ctx.params = params_;
    ctx.weights = weights_;
    return ctx;
}

SearchResult BoundaryExplorer::run_search(const SearchRegion& region, const Objective& objective, Vec3 center) {
    PsoConfig cfg = pso_;
    const std::size_t index = searches_.size();
    cfg.seed = derive_seed(master_seed_, static_cast<std::uint64_t>(uav_id_), index);
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult r = search_optimal(region, objective, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    searches_.push_back({uav_id_, index, center, r.position, r.cost.value(), r.trace,
                         std::chrono::duration<double>(t1 - t0).count()});
    return r;
}

std::optional<Vec3> BoundaryExplorer::destination_approach(Vec3 current) {
    Vec3 lifted = destination_;
    if (env_.terrain().covers(lifted.xy())) {
        lifted.z = std::max(lifted.z, env_.ground_height(lifted.xy()) + params_.altitude_min);
    }
    if (distance(anchor_, lifted) > params_.comm_range) {
        return std::nullopt;
    }
    const FitnessContext ctx = context_at(current);
    auto feasible = [&](const Vec3& p) {
        return satisfies_clearance(p, env_, params_.altitude_min) &&
               f1_obstacle(p, ctx.obstacles, params_).is_finite() &&
               f4_communication(anchor_, p, params_.comm_range).is_finite();
    };
    if (feasible(lifted)) {
        return lifted;
    }
    // The destination itself is blocked (inside an obstacle footprint or under the terrain):
    // settle for the nearest feasible point.
    const SearchRegion region{current, params_.sense_range, env_.bounds()};
    const Objective objective = [&](const Vec3& p) {
        if (!feasible(p)) {
            return Cost::infinite();
        }
        return Cost(distance(p, destination_)) + weighted(weights_.b1, f1_obstacle(p, ctx.obstacles, params_));
    };
    try {
        return run_search(region, objective, current).position;
    } catch (const NoFeasibleCandidate&) {
        return std::nullopt;
    }
}

std::optional<BoundaryExplorer::Leg> BoundaryExplorer::finish(ExploreStop why, Vec3 final_point) {
    done_ = true;
    // A boundary point that already covers the destination ends the route here; sending another
    // UAV to a destination a few metres away would only crowd this one.
    if (why != ExploreStop::Destination && distance(final_point, destination_) <= params_.sense_range) {
        why = ExploreStop::Destination;
    }
    stop_ = why;
    final_ = final_point;
    return Leg{final_point, true};
}

std::optional<BoundaryExplorer::Leg> BoundaryExplorer::next() {
    if (done_) {
        return std::nullopt;
    }
    const double tolerance = cfg_.boundary_tolerance_fraction * params_.sense_range;

    if (distance(current_, destination_) <= params_.sense_range) {
        if (auto approach = destination_approach(current_)) {
            if (!(*approach == current_)) {
                intermediates_.push_back(*approach);
            }
            return finish(ExploreStop::Destination, *approach);
        }
    }
    if (params_.comm_range - distance(anchor_, current_) <= tolerance) {
        return finish(ExploreStop::Boundary, current_);
    }
    if (steps_ >= cfg_.max_steps) {
        Vec3 best = current_;
        for (const auto& p : intermediates_) {
            if (distance(anchor_, p) > distance(anchor_, best)) {
                best = p;
            }
        }
        return finish(ExploreStop::StepLimit, best);
    }

    const FitnessContext ctx = context_at(current_);
    SearchResult r;
    try {
        r = run_search({current_, params_.sense_range, env_.bounds()},
                       [&](const Vec3& p) { return total_fitness(p, ctx, env_); }, current_);
    } catch (const NoFeasibleCandidate& e) {
        done_ = true;
        stop_ = ExploreStop::Blocked;
        final_ = current_;
        failure_ = e.what();
        return std::nullopt;
    }
    ++steps_;

    const double reach = distance(anchor_, r.position);
    if (reach > params_.comm_range - cfg_.boundary_margin) {
        return finish(ExploreStop::MarginRejected, current_);
    }
    intermediates_.push_back(r.position);
    current_ = r.position;
    if (params_.comm_range - reach <= tolerance) {
        return finish(ExploreStop::Boundary, r.position);
    }
    return Leg{r.position, false};
}

ExploreResult explore_to_boundary(Vec3 anchor, Vec3 start, Vec3 destination, const Environment& env,
                                  const UavParams& params, const FitnessWeights& weights, const PsoConfig& pso,
                                  const ExploreConfig& cfg, std::uint64_t master_seed, int uav_id) {
    BoundaryExplorer explorer(env, params, weights, pso, cfg, anchor, start, destination, master_seed, uav_id);
    while (explorer.next()) {
    }
    ExploreResult out;
    out.final_position = explorer.final_position();
    out.intermediates = explorer.intermediates();
    out.destination_reached = explorer.destination_reached();
    out.complete = explorer.stop() != ExploreStop::Blocked;
    out.stop = explorer.stop();
    out.searches = explorer.searches();
    return out;
}

} // namespace uavnet
