#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavnet/deployment.hpp"

namespace uavnet {

struct Provenance {
    std::string tool;
    std::string scenario_hash;
    std::uint64_t seed = 0;

    static Provenance of(const Scenario& s, std::uint64_t seed);
    nlohmann::json to_json() const;
    /// "# uavnet 0.1.0 scenario=<hash> seed=<n>", the first line of every CSV output.
    std::string comment_line() const;
};

struct ArtifactPaths {
    std::filesystem::path scenario;
    std::filesystem::path trajectory;
    std::filesystem::path events;
    std::filesystem::path metrics;
    std::filesystem::path convergence; ///< directory, one CSV per search
    std::filesystem::path timing; ///< empty unless wall-clock timing was requested
};

/// Writes one run into `dir` (created if missing). Everything except timing.json is a pure
/// function of (scenario, seed), so repeated runs produce byte-identical files.
ArtifactPaths write_artifacts(const std::filesystem::path& dir, const Scenario& scenario, const DeploymentResult& result,
                              std::uint64_t seed, bool with_timing = false);

/// "uav<id>_search<index>.csv"
std::string convergence_file(int uav_id, std::size_t search_index);

nlohmann::json metrics_to_json(const DeploymentResult& result);

struct VerifyReport {
    std::vector<std::string> violations;
    std::string status;
    std::size_t samples_checked = 0;
    std::size_t route_nodes = 0;
    double min_obstacle_clearance = 0.0; ///< horizontal gap beyond R_k + D; negative is a collision
    double min_pair_distance = 0.0;
    double min_altitude_margin = 0.0;    ///< z - (ground + altitude_min)

    bool ok() const { return violations.empty(); }
};

/// Re-checks a run directory from its files alone: provenance agreement, route validity
/// (links within R_C, ends near the destination when Complete, matches the event log) and
/// collision freedom of every airborne trajectory sample.
VerifyReport verify_artifacts(const std::filesystem::path& dir);

} // namespace uavnet
