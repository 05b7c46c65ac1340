#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "uavnet/fitness.hpp"

namespace uavnet {

struct PsoConfig {
    std::size_t population = 100;
    std::size_t iter_max = 100;
    double inertia = 1.0;
    double inertia_damping = 0.98;
    double c1 = 1.5;
    double c2 = 1.5;
    std::uint64_t seed = 0;
    double velocity_max_fraction = 0.2; ///< per-iteration speed limit, as a fraction of the ball radius
    std::size_t init_retries = 10;      ///< full resamples before giving up on an all-infeasible swarm

    void validate() const;
};

/// Raised when no sampled candidate has finite cost (the search ball is blocked).
class NoFeasibleCandidate : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Objective = std::function<Cost(const Vec3&)>;

/// Particles live in the closed ball (center, radius) intersected with `bounds`.
struct SearchRegion {
    Vec3 center;
    double radius = 0.0;
    Box3 bounds;

    Vec3 confine(Vec3 p) const;
};

struct Particle {
    Vec3 position;
    Vec3 velocity;
    Vec3 pbest_position;
    Cost pbest_cost;
};

struct Swarm {
    std::vector<Particle> particles;
    Vec3 gbest_position;
    Cost gbest_cost = Cost::infinite();
    std::size_t gbest_index = 0;
    std::mt19937_64 rng;
};

/// Uniform double in [0, 1) built from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& rng);

/// Mixes (master, a, b) into one stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

Swarm init_swarm(const SearchRegion& region, const Objective& objective, const PsoConfig& cfg);

/// One velocity/position update for every particle, then pbest and gbest refresh.
/// Inertia for this iteration is cfg.inertia * cfg.inertia_damping^iteration.
Swarm pso_step(Swarm swarm, const SearchRegion& region, const Objective& objective, const PsoConfig& cfg,
               std::size_t iteration);

struct SearchResult {
    Vec3 position;
    Cost cost;
    std::vector<double> trace; ///< gbest cost after each iteration (size iter_max)
};

SearchResult search_optimal(const SearchRegion& region, const Objective& objective, const PsoConfig& cfg);

/// Relay-placement search: ball of radius R_S around ctx.current, scored by total_fitness.
SearchResult search_optimal(const FitnessContext& ctx, const Environment& env, const PsoConfig& cfg);
Swarm init_swarm(const FitnessContext& ctx, const Environment& env, const PsoConfig& cfg);

} // namespace uavnet
