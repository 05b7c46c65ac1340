#include "uavnet/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "uavnet/scenario_io.hpp"

namespace uavnet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxReported = 50;
// Trajectory coordinates are written with 6 decimals.
constexpr double kPrintSlack = 1e-6;

std::string num(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string num17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec3 to_vec3(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error(p.string() + ": cannot write");
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    return out;
}

class Reporter {
  public:
    explicit Reporter(VerifyReport& r) : r_(r) {}
    void add(const std::string& msg) {
        if (r_.violations.size() < kMaxReported) {
            r_.violations.push_back(msg);
        } else {
            ++dropped_;
        }
    }
    void finish() {
        if (dropped_ > 0) {
            r_.violations.push_back("... and " + std::to_string(dropped_) + " more violations");
        }
    }

  private:
    VerifyReport& r_;
    std::size_t dropped_ = 0;
};

} // namespace

std::string convergence_file(int uav_id, std::size_t search_index) {
    return "uav" + std::to_string(uav_id) + "_search" + std::to_string(search_index) + ".csv";
}

Provenance Provenance::of(const Scenario& s, std::uint64_t seed) {
    return {std::string(kToolName) + " " + kToolVersion, uavnet::scenario_hash(s), seed};
}

json Provenance::to_json() const { return {{"tool", tool}, {"scenario_hash", scenario_hash}, {"seed", seed}}; }

std::string Provenance::comment_line() const {
    return "# " + tool + " scenario=" + scenario_hash + " seed=" + std::to_string(seed);
}

json metrics_to_json(const DeploymentResult& result) {
    const Metrics& m = result.metrics;
    json nodes = json::array();
    for (const auto& n : result.route.nodes) {
        nodes.push_back({{"uav_id", n.uav_id}, {"position", vec(n.position)}, {"destination", n.is_destination}});
    }
    json rows = json::array();
    for (const auto& r : m.rows) {
        rows.push_back({{"uav_id", r.uav_id},
                        {"ideal_position", vec(r.ideal_position)},
                        {"actual_position", vec(r.actual_position)},
                        {"ideal_target_angle", r.ideal_target_angle},
                        {"actual_target_angle", r.actual_target_angle},
                        {"target_angle_error", r.target_angle_error},
                        {"los_angle", r.los_angle},
                        {"deviation", r.deviation},
                        {"deployment_time", r.deployment_time},
                        {"link_length", r.link_length},
                        {"temporary_goals", r.temporary_goals},
                        {"searches", r.searches}});
    }
    return {{"status", to_string(result.status)},
            {"diagnostic", result.diagnostic},
            {"ticks", result.ticks},
            {"route", {{"nodes", nodes}, {"links", result.route.links}}},
            {"summary",
             {{"uav_count", m.uav_count},
              {"mean_link_excluding_final", m.mean_link_excluding_final},
              {"max_link", m.max_link},
              {"mean_deviation", m.mean_deviation},
              {"mean_los_angle", m.mean_los_angle},
              {"mean_target_angle_error", m.mean_target_angle_error},
              {"total_time", m.total_time}}},
            {"nodes", rows}};
}

ArtifactPaths write_artifacts(const fs::path& dir, const Scenario& scenario, const DeploymentResult& result,
                              std::uint64_t seed, bool with_timing) {
    fs::create_directories(dir);
    const Provenance prov = Provenance::of(scenario, seed);
    ArtifactPaths paths{dir / "scenario.toml", dir / "trajectory.csv", dir / "events.jsonl", dir / "metrics.json",
                        dir / "convergence", {}};

    // Self-contained copy: a file terrain is copied next to it.
    Scenario copy = scenario;
    copy.master_seed = seed;
    if (copy.terrain.kind == TerrainSpec::Kind::File) {
        fs::path src(copy.terrain.path);
        if (src.is_relative() && !copy.base_dir.empty()) {
            src = fs::path(copy.base_dir) / src;
        }
        auto out = open_out(dir / "terrain.txt");
        Terrain::load(src.string()).write(out);
        copy.terrain.path = "terrain.txt";
    }
    {
        auto out = open_out(paths.scenario);
        out << prov.comment_line() << "\n" << scenario_to_toml(copy);
    }
    {
        auto out = open_out(paths.trajectory);
        out << prov.comment_line() << "\n"
            << "tick,uav_id,x,y,z,psi,phase\n";
        for (const auto& t : result.trajectories) {
            if (t.phase == Phase::Unassigned) {
                continue;
            }
            out << t.tick << ',' << t.uav_id << ',' << num(t.position.x, 6) << ',' << num(t.position.y, 6) << ','
                << num(t.position.z, 6) << ',' << num(t.heading, 6) << ',' << to_string(t.phase) << '\n';
        }
    }
    {
        auto out = open_out(paths.events);
        out << json{{"provenance", prov.to_json()}}.dump() << "\n";
        for (const auto& e : result.events) {
            out << json{{"tick", e.tick}, {"uav_id", e.uav_id}, {"event", e.event}, {"payload", e.payload}}.dump() << "\n";
        }
    }
    {
        json m = metrics_to_json(result);
        m["provenance"] = prov.to_json();
        auto out = open_out(paths.metrics);
        out << m.dump(2) << "\n";
    }
    fs::remove_all(paths.convergence);
    fs::create_directories(paths.convergence);
    for (const auto& s : result.searches) {
        auto out = open_out(paths.convergence / convergence_file(s.uav_id, s.search_index));
        out << prov.comment_line() << "\n"
            << "iteration,gbest_cost\n";
        for (std::size_t i = 0; i < s.trace.size(); ++i) {
            out << i + 1 << ',' << num17(s.trace[i]) << '\n';
        }
    }
    if (with_timing) {
        paths.timing = dir / "timing.json";
        json searches = json::array();
        std::map<int, double> per_uav;
        double total = 0.0;
        for (const auto& s : result.searches) {
            searches.push_back({{"uav_id", s.uav_id}, {"search_index", s.search_index}, {"wall_seconds", s.wall_seconds}});
            per_uav[s.uav_id] += s.wall_seconds;
            total += s.wall_seconds;
        }
        json uavs = json::array();
        for (const auto& [id, t] : per_uav) {
            uavs.push_back({{"uav_id", id}, {"searching_time", t}});
        }
        auto out = open_out(paths.timing);
        out << json{{"provenance", prov.to_json()}, {"total_search_seconds", total}, {"per_uav", uavs},
                    {"searches", searches}}
                   .dump(2)
            << "\n";
    }
    return paths;
}

VerifyReport verify_artifacts(const fs::path& dir) {
    VerifyReport report;
    Reporter bad(report);

    Scenario sc;
    std::shared_ptr<const Environment> env;
    json metrics;
    try {
        sc = load_scenario((dir / "scenario.toml").string());
        env = sc.build_environment();
        std::ifstream in(dir / "metrics.json");
        if (!in) {
            throw std::runtime_error("metrics.json: cannot open");
        }
        metrics = json::parse(in);
    } catch (const std::exception& e) {
        bad.add(std::string("unreadable run directory: ") + e.what());
        bad.finish();
        return report;
    }
    const UavParams& p = sc.uav;
    report.status = metrics.value("status", "");
    const json prov = metrics.at("provenance");
    const std::string comment = Provenance{prov.at("tool"), prov.at("scenario_hash"), prov.at("seed")}.comment_line();

    // Route as recorded in metrics and as reconstructed from the event log.
    std::vector<Vec3> route{sc.base};
    bool complete_event = false;
    {
        std::ifstream in(dir / "events.jsonl");
        std::string line;
        if (!std::getline(in, line) || json::parse(line).value("provenance", json()) != prov) {
            bad.add("events.jsonl: provenance differs from metrics.json");
        }
        while (std::getline(in, line)) {
            const json e = json::parse(line);
            if (e.at("event") == "occupied") {
                route.push_back(to_vec3(e.at("payload").at("position")));
            } else if (e.at("event") == "route_complete") {
                complete_event = true;
            }
        }
    }
    const json& nodes = metrics.at("route").at("nodes");
    report.route_nodes = nodes.size();
    if (nodes.size() != route.size()) {
        bad.add("route: metrics list " + std::to_string(nodes.size()) + " nodes, event log implies " +
                std::to_string(route.size()));
    } else {
        for (std::size_t i = 0; i < route.size(); ++i) {
            if (to_vec3(nodes[i].at("position")) != route[i]) {
                bad.add("route: node " + std::to_string(i) + " differs between metrics and event log");
            }
        }
    }
    for (std::size_t i = 1; i < route.size(); ++i) {
        const double link = distance(route[i - 1], route[i]);
        if (link > p.comm_range * (1.0 + 1e-12)) {
            bad.add("route: link " + std::to_string(i) + " is " + num(link, 3) + " m, beyond R_C");
        }
    }
    if (report.status == "complete") {
        if (!complete_event || nodes.empty() || !nodes.back().value("destination", false)) {
            bad.add("route: status complete but the last node is not marked as the destination");
        } else if (distance(route.back(), sc.destination) > p.sense_range) {
            bad.add("route: final node is " + num(distance(route.back(), sc.destination), 3) +
                    " m from the destination");
        }
    }

    // Collision freedom of every airborne sample.
    report.min_obstacle_clearance = std::numeric_limits<double>::infinity();
    report.min_pair_distance = std::numeric_limits<double>::infinity();
    report.min_altitude_margin = std::numeric_limits<double>::infinity();
    {
        std::ifstream in(dir / "trajectory.csv");
        std::string line;
        if (!std::getline(in, line) || line != comment) {
            bad.add("trajectory.csv: provenance differs from metrics.json");
        }
        std::getline(in, line);
        std::uint64_t current_tick = 0;
        std::vector<std::pair<int, Vec3>> same_tick;
        auto check_pairs = [&]() {
            for (std::size_t i = 0; i < same_tick.size(); ++i) {
                for (std::size_t j = i + 1; j < same_tick.size(); ++j) {
                    const double d = distance(same_tick[i].second, same_tick[j].second);
                    report.min_pair_distance = std::min(report.min_pair_distance, d);
                    if (d < 2.0 * p.size_d - kPrintSlack) {
                        bad.add("tick " + std::to_string(current_tick) + ": UAVs " + std::to_string(same_tick[i].first) +
                                " and " + std::to_string(same_tick[j].first) + " are " + num(d, 3) + " m apart");
                    }
                }
            }
            same_tick.clear();
        };
        std::size_t line_no = 2;
        while (std::getline(in, line)) {
            ++line_no;
            const auto cells = split(line, ',');
            if (cells.size() != 7) {
                bad.add("trajectory.csv:" + std::to_string(line_no) + ": malformed row");
                continue;
            }
            const std::uint64_t tick = std::stoull(cells[0]);
            const int id = std::stoi(cells[1]);
            const Vec3 pos{std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4])};
            if (tick != current_tick) {
                check_pairs();
                current_tick = tick;
            }
            if (cells[6] == to_string(Phase::Unassigned)) {
                continue;
            }
            ++report.samples_checked;
            same_tick.emplace_back(id, pos);
            const std::string where = "tick " + std::to_string(tick) + " UAV " + std::to_string(id);

            if (!env->terrain().covers(pos.xy())) {
                bad.add(where + ": outside the terrain extent");
            } else {
                const double margin = pos.z - env->ground_height(pos.xy()) - p.altitude_min;
                report.min_altitude_margin = std::min(report.min_altitude_margin, margin);
                if (margin < -kPrintSlack) {
                    bad.add(where + ": " + num(-margin, 3) + " m below the minimum altitude");
                }
            }
            for (const auto& o : env->obstacles()) {
                if (!o.spans(pos.z)) {
                    continue;
                }
                const double gap = horizontal_distance(pos, {o.center.x, o.center.y, pos.z}) - o.radius - p.size_d;
                report.min_obstacle_clearance = std::min(report.min_obstacle_clearance, gap);
                if (gap < -kPrintSlack) {
                    bad.add(where + ": inside obstacle " + o.id + " (" + num(-gap, 3) + " m past R + D)");
                }
            }
        }
        check_pairs();
    }

    if (fs::is_directory(dir / "convergence")) {
        std::vector<fs::path> files;
        for (const auto& f : fs::directory_iterator(dir / "convergence")) {
            files.push_back(f.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f);
            std::string line;
            const std::string name = f.filename().string();
            if (!std::getline(in, line) || line != comment) {
                bad.add(name + ": provenance differs from metrics.json");
            }
            std::getline(in, line);
            double prev = std::numeric_limits<double>::infinity();
            while (std::getline(in, line)) {
                const auto cells = split(line, ',');
                if (cells.size() != 2) {
                    continue;
                }
                const double v = std::stod(cells[1]);
                if (v > prev) {
                    bad.add(name + ": gbest increased at iteration " + cells[0]);
                }
                prev = v;
            }
        }
    } else {
        bad.add("convergence directory missing");
    }
    bad.finish();
    return report;
}

} // namespace uavnet
