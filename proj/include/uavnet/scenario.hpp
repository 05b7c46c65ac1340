#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uavnet/behavior.hpp"
#include "uavnet/environment.hpp"
#include "uavnet/explore.hpp"
#include "uavnet/fitness.hpp"
#include "uavnet/pso.hpp"
#include "uavnet/vehicle.hpp"

namespace uavnet {

/// Where the terrain comes from: a file, or one of the synthetic generators.
struct TerrainSpec {
    enum class Kind { File, Flat, Ramp, Rolling };
    Kind kind = Kind::Flat;
    std::string path; ///< Kind::File, resolved relative to the scenario file
    Vec2 origin{0.0, 0.0};
    double cell_size = 10.0;
    std::size_t rows = 121;
    std::size_t cols = 121;
    double base_height = 0.0;
    double slope_x = 0.0;       ///< Ramp
    double slope_y = 0.0;       ///< Ramp
    double amplitude = 0.0;     ///< Rolling
    double feature_size = 200.0; ///< Rolling
    std::uint64_t seed = 1;     ///< Rolling

    Terrain build() const;
};

const char* to_string(TerrainSpec::Kind k);

struct Scenario {
    std::string name = "scenario";
    TerrainSpec terrain;
    std::vector<Obstacle> obstacles;
    Box3 bounds{{0.0, 0.0, 0.0}, {1200.0, 1200.0, 1000.0}};
    Vec3 base;
    Vec3 destination;
    UavParams uav;
    std::size_t uav_budget = 10;
    PsoConfig pso;
    ExploreConfig explore;
    BehaviorGains gains;
    FitnessWeights weights;
    double dt = 0.1;
    std::uint64_t tick_budget = 100000;
    std::uint64_t master_seed = 0;
    std::string base_dir; ///< directory relative terrain paths resolve against (not serialized)

    /// Builds the environment (loading or generating terrain) and checks every invariant.
    /// Throws std::invalid_argument naming the violated invariant.
    std::shared_ptr<const Environment> build_environment() const;
    void validate(const Environment& env) const;
};

} // namespace uavnet
