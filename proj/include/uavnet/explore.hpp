#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavnet/pso.hpp"

namespace uavnet {

struct ExploreConfig {
    /// A search result farther than comm_range - boundary_margin from the anchor is rejected
    /// and the last in-range point becomes final.
    double boundary_margin = 0.0;
    /// Exploration stops once the current point is within this fraction of R_S of the
    /// communication boundary.
    double boundary_tolerance_fraction = 0.1;
    /// Hard cap on searches per explore; 0 means 4 * ceil(R_C / R_S).
    std::size_t max_steps = 0;
};

/// One finished optimizer call, kept for convergence output and timing.
struct SearchRecord {
    int uav_id = 0;
    std::size_t search_index = 0;
    Vec3 center;
    Vec3 result;
    double cost = 0.0;
    std::vector<double> trace;
    double wall_seconds = 0.0;
};

enum class ExploreStop { None, Boundary, MarginRejected, StepLimit, Destination, Blocked };

const char* to_string(ExploreStop s);

/// Incremental explore-to-boundary: each call to next() runs at most one search and returns the
/// next point to fly to. Searches always chain from the previous nominal point, so driving this to
/// completion without flying gives the same chain as a full deployment.
class BoundaryExplorer {
  public:
    struct Leg {
        Vec3 target;
        bool is_final = false;
    };

    BoundaryExplorer(const Environment& env, const UavParams& params, const FitnessWeights& weights,
                     const PsoConfig& pso, const ExploreConfig& cfg, Vec3 anchor, Vec3 start, Vec3 destination,
                     std::uint64_t master_seed, int uav_id);

    /// Returns the next leg; the final leg is flagged. Once done(), returns nullopt.
    /// On a blocked search the explorer finishes with stop() == Blocked and nullopt.
    std::optional<Leg> next();

    bool done() const { return done_; }
    ExploreStop stop() const { return stop_; }
    bool destination_reached() const { return stop_ == ExploreStop::Destination; }
    const std::string& failure() const { return failure_; }

    Vec3 anchor() const { return anchor_; }
    Vec3 final_position() const { return final_; }
    const std::vector<Vec3>& intermediates() const { return intermediates_; }
    const std::vector<SearchRecord>& searches() const { return searches_; }

  private:
    FitnessContext context_at(Vec3 center) const;
    SearchResult run_search(const SearchRegion& region, const Objective& objective, Vec3 center);
    std::optional<Vec3> destination_approach(Vec3 current);
    std::optional<Leg> finish(ExploreStop why, Vec3 final_point);

    const Environment& env_;
    UavParams params_;
    FitnessWeights weights_;
    PsoConfig pso_;
    ExploreConfig cfg_;
    Vec3 anchor_;
    Vec3 current_;
    Vec3 destination_;
    std::uint64_t master_seed_;
    int uav_id_;
    std::size_t steps_ = 0;
    bool done_ = false;
    ExploreStop stop_ = ExploreStop::None;
    Vec3 final_;
    std::string failure_;
    std::vector<Vec3> intermediates_;
    std::vector<SearchRecord> searches_;
};

struct ExploreResult {
    Vec3 final_position;
    std::vector<Vec3> intermediates;
    bool destination_reached = false;
    bool complete = true; ///< false when a search found no feasible candidate
    ExploreStop stop = ExploreStop::None;
    std::vector<SearchRecord> searches;
};

/// Runs the explore chain to completion assuming every leg is flown exactly.
ExploreResult explore_to_boundary(Vec3 anchor, Vec3 start, Vec3 destination, const Environment& env,
                                  const UavParams& params, const FitnessWeights& weights, const PsoConfig& pso,
                                  const ExploreConfig& cfg = {}, std::uint64_t master_seed = 0, int uav_id = 0);

} // namespace uavnet
