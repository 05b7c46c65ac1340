#include "uavnet/scenario.hpp"

#include <cmath>
#include <filesystem>

namespace uavnet {

const char* to_string(TerrainSpec::Kind k) {
    switch (k) {
    case TerrainSpec::Kind::File:
        return "file";
    case TerrainSpec::Kind::Flat:
        return "flat";
    case TerrainSpec::Kind::Ramp:
        return "ramp";
    case TerrainSpec::Kind::Rolling:
        return "rolling";
    }
    return "unknown";
}

Terrain TerrainSpec::build() const {
    switch (kind) {
    case Kind::File:
        return Terrain::load(path);
    case Kind::Flat:
        return Terrain::flat(origin, cell_size, rows, cols, base_height);
    case Kind::Ramp:
        return Terrain::ramp(origin, cell_size, rows, cols, base_height, slope_x, slope_y);
    case Kind::Rolling:
        return Terrain::rolling(origin, cell_size, rows, cols, base_height, amplitude, feature_size, seed);
    }
    throw std::invalid_argument("terrain: unknown kind");
}

std::shared_ptr<const Environment> Scenario::build_environment() const {
    TerrainSpec spec = terrain;
    if (spec.kind == TerrainSpec::Kind::File && !base_dir.empty() && std::filesystem::path(spec.path).is_relative()) {
        spec.path = (std::filesystem::path(base_dir) / spec.path).string();
    }
    auto env = std::make_shared<const Environment>(spec.build(), obstacles, bounds);
    validate(*env);
    return env;
}

void Scenario::validate(const Environment& env) const {
    uav.validate();
    pso.validate();
    gains.validate();
    weights.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("run: dt must be positive");
    }
    if (uav_budget < 1) {
        throw std::invalid_argument("run: uav_budget must be >= 1");
    }
    if (tick_budget < 1) {
        throw std::invalid_argument("run: tick_budget must be >= 1");
    }
    if (!(explore.boundary_margin >= 0.0) || !(explore.boundary_tolerance_fraction >= 0.0)) {
        throw std::invalid_argument("explore: boundary_margin and boundary_tolerance must be >= 0");
    }
    if (base == destination) {
        throw std::invalid_argument("scenario: base and destination must differ");
    }
    for (const auto& [label, p] : {std::pair{"base", base}, std::pair{"destination", destination}}) {
        if (!p.is_finite() || !env.bounds().contains(p)) {
            throw std::invalid_argument(std::string("scenario: ") + label + " inside bounds");
        }
        if (!env.terrain().covers(p.xy())) {
            throw std::invalid_argument(std::string("scenario: ") + label + " over terrain extent");
        }
    }
    if (base.z < env.ground_height(base.xy()) + uav.altitude_min) {
        throw std::invalid_argument("scenario: base above terrain (needs altitude_min clearance)");
    }
    if (destination.z < env.ground_height(destination.xy())) {
        throw std::invalid_argument("scenario: destination above terrain");
    }
}

} // namespace uavnet
