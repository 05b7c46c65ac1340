#include "uavnet/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace uavnet {

using nlohmann::json;

const char* to_string(Phase p) {
    switch (p) {
    case Phase::Unassigned:
        return "unassigned";
    case Phase::Assigned:
        return "assigned";
    case Phase::Explore:
        return "explore";
    case Phase::Occupied:
        return "occupied";
    }
    return "unknown";
}

const char* to_string(RunStatus s) {
    switch (s) {
    case RunStatus::Complete:
        return "complete";
    case RunStatus::Failure:
        return "failure";
    case RunStatus::Timeout:
        return "timeout";
    }
    return "unknown";
}

namespace {

json to_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

constexpr double kLookAheadSeconds = 1.0;

BehaviorInputs sense(const UavAgent& agent, Vec3 target, const WorldSnapshot& world, const DeploymentContext& ctx,
                     bool avoid) {
    const auto& params = ctx.scenario.uav;
    const Vec3 p = agent.state.position;
    BehaviorInputs in;
    in.self = agent.state;
    in.target = target;

    if (avoid) {
        for (const auto& o : ctx.env.detect_obstacles(p, params.sense_range)) {
            const double d = std::max(0.0, o.boundary_distance(p.xy()) - params.size_d);
            if (!in.nearest_obstacle || d < in.nearest_obstacle->distance) {
                in.nearest_obstacle = ObstacleSighting{o.center, o.radius, d};
            }
        }
        for (std::size_t j = 0; j < world.states.size(); ++j) {
            if (world.states[j].id == agent.state.id || world.phases[j] == Phase::Unassigned) {
                continue;
            }
            const double d = distance(p, world.states[j].position);
            if (d <= params.sense_range && (!in.nearest_uav || d < in.nearest_uav->distance)) {
                in.nearest_uav = NeighborSighting{world.states[j].position, d};
            }
        }
    }

    const auto& terrain = ctx.env.terrain();
    double floor = -std::numeric_limits<double>::infinity();
    for (Vec3 q : {p, p + kLookAheadSeconds * agent.state.velocity}) {
        if (terrain.covers(q.xy())) {
            floor = std::max(floor, terrain.height_at(q.xy()) + params.altitude_min);
        }
    }
    if (std::isfinite(floor)) {
        in.altitude_floor = floor;
    }
    return in;
}

Vec3 fly(const UavAgent& agent, Vec3 target, const WorldSnapshot& world, const DeploymentContext& ctx) {
    return compose_velocity(sense(agent, target, world, ctx, true), ctx.scenario.gains, ctx.scenario.uav);
}

// Station keeping: move-to-target toward the node plus terrain clearance, no evasive terms.
Vec3 hover(const UavAgent& agent, Vec3 node, const WorldSnapshot& world, const DeploymentContext& ctx) {
    return compose_velocity(sense(agent, node, world, ctx, false), ctx.scenario.gains, ctx.scenario.uav);
}

} // namespace

TickOutput tick_uav(UavAgent agent, const WorldSnapshot& world, const DeploymentContext& ctx) {
    TickOutput out{std::move(agent), {}, {}, false, false};
    UavAgent& a = out.agent;
    const Scenario& sc = ctx.scenario;
    const int id = a.state.id;
    auto emit = [&](std::string name, json payload) {
        out.events.push_back({world.tick, id, std::move(name), std::move(payload)});
    };
    auto transition = [&](Phase to) {
        emit("transition", {{"from", to_string(a.phase)}, {"to", to_string(to)}});
        a.phase = to;
    };

    switch (a.phase) {
    case Phase::Unassigned: {
        if (world.dispatch && world.dispatch_recipient == id && world.dispatch->tick < world.tick) {
            a.route = world.dispatch->route;
            a.cursor = 0;
            a.dispatch_tick = world.tick;
            out.consumed_dispatch = true;
            transition(Phase::Assigned);
            emit("assigned", {{"from", world.dispatch->from},
                              {"target", to_json(a.route.empty() ? sc.base : a.route.back())},
                              {"route_nodes", a.route.size()}});
        }
        break;
    }
    case Phase::Assigned: {
        // Established nodes are occupied by hovering UAVs, so a node counts as passed once the
        // UAV is inside the neighbour-avoidance radius around it.
        while (a.cursor < a.route.size() && distance(a.state.position, a.route[a.cursor]) < sc.gains.b_adr) {
            emit("node_passed", {{"index", a.cursor}, {"node", to_json(a.route[a.cursor])}});
            ++a.cursor;
        }
        if (a.cursor >= a.route.size()) {
            a.anchor = a.route.empty() ? sc.base : a.route.back();
            transition(Phase::Explore);
            break;
        }
        out.velocity = fly(a, a.route[a.cursor], world, ctx);
        break;
    }
    case Phase::Explore: {
        if (!a.explorer) {
            a.explorer = std::make_shared<BoundaryExplorer>(ctx.env, sc.uav, sc.weights, sc.pso, sc.explore, a.anchor,
                                                            a.anchor, sc.destination, ctx.master_seed, id);
            emit("explore_start", {{"anchor", to_json(a.anchor)}});
        }
        const bool leg_done = a.leg && distance(a.state.position, a.leg->target) < sc.uav.size_d;
        if (leg_done && a.leg->is_final) {
            a.final_position = a.leg->target;
            a.is_destination = a.explorer->destination_reached();
            a.occupied_tick = world.tick;
            transition(Phase::Occupied);
            emit("occupied", {{"position", to_json(a.final_position)},
                              {"destination", a.is_destination},
                              {"stop", to_string(a.explorer->stop())},
                              {"temporary_goals", a.explorer->intermediates().size()}});
            if (a.is_destination) {
                emit("route_complete", {{"position", to_json(a.final_position)}});
            } else {
                emit("dispatch", {{"position", to_json(a.final_position)}});
            }
            out.velocity = hover(a, a.final_position, world, ctx);
            break;
        }
        if (!a.leg || leg_done) {
            if (a.leg) {
                emit("leg_reached", {{"position", to_json(a.leg->target)}});
            }
            // Search state is shared with the committed agent; a fresh explorer copy keeps
            // tick_uav free of side effects on its input.
            a.explorer = std::make_shared<BoundaryExplorer>(*a.explorer);
            const std::size_t before = a.explorer->searches().size();
            a.leg = a.explorer->next();
            for (std::size_t k = before; k < a.explorer->searches().size(); ++k) {
                const auto& s = a.explorer->searches()[k];
                emit("search", {{"index", s.search_index},
                                {"center", to_json(s.center)},
                                {"result", to_json(s.result)},
                                {"cost", s.cost}});
            }
            if (!a.leg) {
                out.blocked = true;
                emit("blocked", {{"position", to_json(a.state.position)}, {"reason", a.explorer->failure()}});
                break;
            }
            emit("leg_target", {{"position", to_json(a.leg->target)}, {"final", a.leg->is_final}});
        }
        out.velocity = fly(a, a.leg->target, world, ctx);
        break;
    }
    case Phase::Occupied:
        out.velocity = hover(a, a.final_position, world, ctx);
        break;
    }
    return out;
}

DeploymentResult run_deployment(const Scenario& scenario, std::uint64_t master_seed) {
    auto env = scenario.build_environment();
    return run_deployment(scenario, *env, master_seed);
}

DeploymentResult run_deployment(const Scenario& scenario, const Environment& env, std::uint64_t master_seed) {
    scenario.validate(env);
    const DeploymentContext ctx{scenario, env, master_seed};
    DeploymentResult result;

    std::vector<UavAgent> agents(scenario.uav_budget);
    const Vec3 los = scenario.destination - scenario.base;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].state.id = static_cast<int>(i);
        agents[i].state.position = scenario.base;
        agents[i].state.heading = wrap_angle(std::atan2(los.y, los.x));
    }

    std::vector<RouteNode> nodes{{-1, scenario.base, false}};
    std::optional<DispatchMessage> pending = DispatchMessage{-1, 0, {}};
    result.events.push_back({0, -1, "dispatch", {{"position", to_json(scenario.base)}}});

    auto record = [&](std::uint64_t tick) {
        for (const auto& a : agents) {
            result.trajectories.push_back({tick, a.state.id, a.state.position, a.state.heading, a.phase});
        }
    };
    record(0);

    bool finished = false;
    std::uint64_t tick = 0;
    while (!finished) {
        if (tick >= scenario.tick_budget) {
            result.status = RunStatus::Timeout;
            result.diagnostic = "tick budget of " + std::to_string(scenario.tick_budget) + " exceeded";
            result.events.push_back({tick, -1, "timeout", {{"ticks", tick}}});
            break;
        }
        ++tick;

        WorldSnapshot world;
        world.tick = tick;
        world.dispatch = pending;
        for (const auto& a : agents) {
            world.states.push_back(a.state);
            world.phases.push_back(a.phase);
            if (world.dispatch_recipient < 0 && a.phase == Phase::Unassigned) {
                world.dispatch_recipient = a.state.id;
            }
        }

        std::vector<TickOutput> outputs;
        outputs.reserve(agents.size());
        for (const auto& a : agents) {
            outputs.push_back(tick_uav(a, world, ctx));
        }

        for (std::size_t i = 0; i < agents.size(); ++i) {
            auto& o = outputs[i];
            const Phase before = agents[i].phase;
            agents[i] = std::move(o.agent);
            if (agents[i].phase != Phase::Unassigned) {
                agents[i].state = step(agents[i].state, o.velocity, scenario.dt);
            }
            for (auto& e : o.events) {
                result.events.push_back(std::move(e));
            }
            if (o.consumed_dispatch) {
                pending.reset();
            }
            if (o.blocked) {
                result.status = RunStatus::Failure;
                result.diagnostic = "UAV " + std::to_string(agents[i].state.id) + " blocked: " +
                                    agents[i].explorer->failure();
                finished = true;
            }
            if (before == Phase::Explore && agents[i].phase == Phase::Occupied) {
                nodes.push_back({agents[i].state.id, agents[i].final_position, agents[i].is_destination});
                if (agents[i].is_destination) {
                    result.status = RunStatus::Complete;
                    finished = true;
                } else {
                    std::vector<Vec3> route;
                    for (std::size_t k = 1; k < nodes.size(); ++k) {
                        route.push_back(nodes[k].position);
                    }
                    pending = DispatchMessage{agents[i].state.id, tick, std::move(route)};
                    const bool spare = std::any_of(agents.begin(), agents.end(),
                                                   [](const UavAgent& u) { return u.phase == Phase::Unassigned; });
                    if (!spare) {
                        result.status = RunStatus::Failure;
                        result.diagnostic = "UAV budget of " + std::to_string(scenario.uav_budget) +
                                            " exhausted before reaching the destination";
                        result.events.push_back({tick, -1, "budget_exhausted", {{"uavs", scenario.uav_budget}}});
                        finished = true;
                    }
                }
            }
        }
        record(tick);
    }

    result.ticks = tick;
    result.route.nodes = nodes;
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        result.route.links.push_back(distance(nodes[k - 1].position, nodes[k].position));
    }
    for (const auto& a : agents) {
        if (a.explorer) {
            const auto& s = a.explorer->searches();
            result.searches.insert(result.searches.end(), s.begin(), s.end());
        }
    }
    result.metrics = compute_metrics(result.route, result.events, result.searches, scenario, env);
    result.metrics.total_time = static_cast<double>(tick) * scenario.dt;
    return result;
}

Metrics compute_metrics(const RouteGraph& route, const std::vector<Event>& events,
                        const std::vector<SearchRecord>& searches, const Scenario& scenario,
                        const Environment& env) {
    Metrics m;
    if (route.nodes.size() < 2) {
        return m;
    }
    const Vec3 base = route.nodes.front().position;
    const Vec3 dest = scenario.destination;
    const double span = distance(base, dest);
    if (span == 0.0) {
        return m;
    }
    const double ideal_bearing = std::atan2(dest.y - base.y, dest.x - base.x);

    std::map<int, std::uint64_t> assigned_tick;
    std::map<int, std::uint64_t> occupied_tick;
    std::map<int, std::size_t> goals;
    for (const auto& e : events) {
        if (e.event == "transition" && e.payload.at("to") == "assigned") {
            assigned_tick[e.uav_id] = e.tick;
        } else if (e.event == "transition" && e.payload.at("to") == "occupied") {
            occupied_tick[e.uav_id] = e.tick;
        } else if (e.event == "leg_target") {
            ++goals[e.uav_id];
        }
    }

    for (std::size_t k = 1; k < route.nodes.size(); ++k) {
        const RouteNode& node = route.nodes[k];
        const Vec3 prev = route.nodes[k - 1].position;
        MetricsRow row;
        row.uav_id = node.uav_id;
        row.actual_position = node.position;

        const double s = std::min(1.0, static_cast<double>(k) * scenario.uav.comm_range / span);
        Vec3 ideal = base + s * (dest - base);
        if (env.terrain().covers(ideal.xy())) {
            ideal.z = env.ground_height(ideal.xy()) + scenario.uav.altitude_min;
        }
        row.ideal_position = ideal;
        row.deviation = distance(ideal, node.position);

        const Vec3 link = node.position - prev;
        row.link_length = link.norm();
        row.ideal_target_angle = ideal_bearing;
        row.actual_target_angle = std::atan2(link.y, link.x);
        row.target_angle_error = std::abs(wrap_angle(row.actual_target_angle - row.ideal_target_angle));
        const Vec3 to_dest = dest - prev;
        row.los_angle = (link.squared_norm() == 0.0 || to_dest.squared_norm() == 0.0) ? 0.0 : angle_between(link, to_dest);

        if (assigned_tick.count(node.uav_id) && occupied_tick.count(node.uav_id)) {
            row.deployment_time =
                static_cast<double>(occupied_tick[node.uav_id] - assigned_tick[node.uav_id]) * scenario.dt;
        }
        row.temporary_goals = goals[node.uav_id];
        for (const auto& rec : searches) {
            if (rec.uav_id == node.uav_id) {
                row.searching_time += rec.wall_seconds;
                ++row.searches;
            }
        }
        m.rows.push_back(row);
    }

    m.uav_count = m.rows.size();
    double link_sum = 0.0;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        const auto& r = m.rows[i];
        if (i + 1 < m.rows.size()) {
            link_sum += r.link_length;
        }
        m.max_link = std::max(m.max_link, r.link_length);
        m.mean_deviation += r.deviation;
        m.mean_los_angle += r.los_angle;
        m.mean_target_angle_error += r.target_angle_error;
    }
    const auto n = static_cast<double>(m.rows.size());
    m.mean_link_excluding_final = m.rows.size() > 1 ? link_sum / (n - 1.0) : m.rows.front().link_length;
    m.mean_deviation /= n;
    m.mean_los_angle /= n;
    m.mean_target_angle_error /= n;
    return m;
}

} // namespace uavnet
