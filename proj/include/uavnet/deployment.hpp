#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavnet/scenario.hpp"

namespace uavnet {

enum class Phase { Unassigned, Assigned, Explore, Occupied };

const char* to_string(Phase p);

/// Per-UAV deployment state. Phases only ever advance Unassigned -> Assigned -> Explore -> Occupied.
struct UavAgent {
    UavState state;
    Phase phase = Phase::Unassigned;

    // Assigned: established nodes to pass through, last one is where exploring starts.
    std::vector<Vec3> route;
    std::size_t cursor = 0;

    // Explore
    Vec3 anchor;
    std::shared_ptr<BoundaryExplorer> explorer;
    std::optional<BoundaryExplorer::Leg> leg;

    // Occupied
    Vec3 final_position;
    bool is_destination = false;

    std::uint64_t dispatch_tick = 0;
    std::uint64_t occupied_tick = 0;
};

struct Event {
    std::uint64_t tick = 0;
    int uav_id = -1; ///< -1 for the base station
    std::string event;
    nlohmann::json payload;
};

/// "Be its turn" message: the last established node and the route leading to it.
struct DispatchMessage {
    int from = -1;
    std::uint64_t tick = 0;
    std::vector<Vec3> route;
};

/// Frozen view of the world that every agent reads during one tick.
struct WorldSnapshot {
    std::uint64_t tick = 0;
    std::vector<UavState> states;
    std::vector<Phase> phases;
    std::optional<DispatchMessage> dispatch;
    int dispatch_recipient = -1; ///< lowest-id Unassigned UAV, if any
};

struct DeploymentContext {
    const Scenario& scenario;
    const Environment& env;
    std::uint64_t master_seed;
};

struct TickOutput {
    UavAgent agent;
    Vec3 velocity;
    std::vector<Event> events;
    bool consumed_dispatch = false;
    bool blocked = false; ///< Explore search failed: the corridor is blocked
};

/// Advances one agent by one tick against a frozen snapshot. Never mutates shared state.
TickOutput tick_uav(UavAgent agent, const WorldSnapshot& world, const DeploymentContext& ctx);

struct RouteNode {
    int uav_id = -1; ///< -1 for the base station
    Vec3 position;
    bool is_destination = false;
};

struct RouteGraph {
    std::vector<RouteNode> nodes; ///< base first, then UAVs in deployment order
    std::vector<double> links;    ///< links[i] joins nodes[i] and nodes[i + 1]
};

struct TrajectorySample {
    std::uint64_t tick = 0;
    int uav_id = 0;
    Vec3 position;
    double heading = 0.0;
    Phase phase = Phase::Unassigned;
};

struct MetricsRow {
    int uav_id = 0;
    Vec3 ideal_position;
    Vec3 actual_position;
    double ideal_target_angle = 0.0;  ///< world-frame bearing of the base -> destination line
    double actual_target_angle = 0.0; ///< world-frame bearing of the link from the previous node
    double target_angle_error = 0.0;  ///< |wrapped difference| of the two bearings
    double los_angle = 0.0;           ///< 3D angle between the link and previous node -> destination
    double deviation = 0.0;           ///< |actual - ideal|
    double searching_time = 0.0;      ///< wall clock of this UAV's optimizer calls (s)
    double deployment_time = 0.0;     ///< simulated time from dispatch to Occupied (s)
    double link_length = 0.0;
    std::size_t temporary_goals = 0;
    std::size_t searches = 0;
};

struct Metrics {
    std::vector<MetricsRow> rows;
    std::size_t uav_count = 0;
    double mean_link_excluding_final = 0.0;
    double max_link = 0.0;
    double mean_deviation = 0.0;
    double mean_los_angle = 0.0;
    double mean_target_angle_error = 0.0;
    double total_time = 0.0; ///< simulated
};

enum class RunStatus { Complete, Failure, Timeout };

const char* to_string(RunStatus s);

struct DeploymentResult {
    RunStatus status = RunStatus::Failure;
    std::string diagnostic;
    RouteGraph route;
    std::vector<TrajectorySample> trajectories;
    std::vector<Event> events;
    std::vector<SearchRecord> searches;
    Metrics metrics;
    std::uint64_t ticks = 0;
};

DeploymentResult run_deployment(const Scenario& scenario, const Environment& env, std::uint64_t master_seed);
DeploymentResult run_deployment(const Scenario& scenario, std::uint64_t master_seed);

Metrics compute_metrics(const RouteGraph& route, const std::vector<Event>& events,
                        const std::vector<SearchRecord>& searches, const Scenario& scenario,
                        const Environment& env);

} // namespace uavnet
