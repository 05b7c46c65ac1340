#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "uavnet/artifacts.hpp"
#include "uavnet/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace uavnet;

namespace {

enum Exit : int {
    kOk = 0,
    kRunFailure = 1,
    kRunTimeout = 2,
    kVerifyFailed = 3,
    kUsage = 64,
    kBadInput = 65,
};

int exit_code(RunStatus s) {
    switch (s) {
    case RunStatus::Complete:
        return kOk;
    case RunStatus::Failure:
        return kRunFailure;
    case RunStatus::Timeout:
        return kRunTimeout;
    }
    return kRunFailure;
}

fs::path default_out_dir(const Scenario& sc, std::uint64_t seed) {
    const char* env = std::getenv("UAVNET_OUT_DIR");
    const fs::path root = env && *env ? fs::path(env) : fs::path("runs");
    return root / (sc.name + "-seed" + std::to_string(seed));
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const auto v = std::stoull(text);
            return {v, v};
        }
        const auto a = std::stoull(text.substr(0, dots));
        const auto b = std::stoull(text.substr(dots + 2));
        if (b < a) {
            throw std::invalid_argument("empty range");
        }
        return {a, b};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--seeds", "expected A..B with A <= B, got '" + text + "'");
    }
}

void print_run(const DeploymentResult& r, const fs::path& out) {
    std::printf("status: %s%s%s\n", to_string(r.status), r.diagnostic.empty() ? "" : " (",
                r.diagnostic.empty() ? "" : (r.diagnostic + ")").c_str());
    std::printf("uavs deployed: %zu\n", r.metrics.uav_count);
    for (const auto& row : r.metrics.rows) {
        std::printf("  uav %d  link %7.2f m  deviation %6.2f m  target angle %.4f rad  goals %zu  deploy %.1f s\n",
                    row.uav_id, row.link_length, row.deviation, row.los_angle, row.temporary_goals,
                    row.deployment_time);
    }
    std::printf("mean link (excluding final): %.2f m\n", r.metrics.mean_link_excluding_final);
    std::printf("simulated time: %.1f s\n", r.metrics.total_time);
    std::printf("artifacts: %s\n", out.string().c_str());
}

struct Stat {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double stddev() const {
        if (n < 2) {
            return 0.0;
        }
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1)));
    }
};

struct SweepRow {
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::Failure;
    Metrics metrics;
    double search_seconds = 0.0;
    double mean_deployment_time = 0.0;
};

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed_opt, std::string out_opt, bool timing) {
    const Scenario sc = load_scenario(path);
    const std::uint64_t seed = seed_opt.value_or(sc.master_seed);
    const fs::path out = out_opt.empty() ? default_out_dir(sc, seed) : fs::path(out_opt);
    const DeploymentResult r = run_deployment(sc, seed);
    write_artifacts(out, sc, r, seed, timing);
    print_run(r, out);
    return exit_code(r.status);
}

int cmd_verify(const std::string& dir) {
    const VerifyReport rep = verify_artifacts(dir);
    std::printf("status in log: %s\n", rep.status.c_str());
    std::printf("route nodes: %zu, airborne samples checked: %zu\n", rep.route_nodes, rep.samples_checked);
    std::printf("min obstacle clearance beyond R+D: %.3f m\n", rep.min_obstacle_clearance);
    std::printf("min pairwise distance: %.3f m\n", rep.min_pair_distance);
    std::printf("min altitude margin: %.3f m\n", rep.min_altitude_margin);
    for (const auto& v : rep.violations) {
        std::fprintf(stderr, "violation: %s\n", v.c_str());
    }
    std::printf("%s\n", rep.ok() ? "verify: OK" : "verify: FAILED");
    return rep.ok() ? kOk : kVerifyFailed;
}

int cmd_sweep(const std::string& path, const std::string& seeds, const std::string& out, unsigned jobs) {
    const auto [first, last] = parse_seed_range(seeds);
    const Scenario sc = load_scenario(path);
    const auto env = sc.build_environment();
    const std::size_t count = static_cast<std::size_t>(last - first + 1);
    std::vector<SweepRow> rows(count);
    std::atomic<std::size_t> next{0};
    std::mutex io;
    std::exception_ptr error;

    auto worker = [&]() {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                const std::uint64_t seed = first + i;
                const DeploymentResult r = run_deployment(sc, *env, seed);
                if (!out.empty()) {
                    write_artifacts(fs::path(out) / ("seed_" + std::to_string(seed)), sc, r, seed, true);
                }
                SweepRow& row = rows[i];
                row.seed = seed;
                row.status = r.status;
                row.metrics = r.metrics;
                for (const auto& s : r.searches) {
                    row.search_seconds += s.wall_seconds;
                }
                for (const auto& m : r.metrics.rows) {
                    row.mean_deployment_time += m.deployment_time / static_cast<double>(r.metrics.rows.size());
                }
                std::lock_guard lock(io);
                std::fprintf(stderr, "seed %llu: %s, %zu UAVs\n", static_cast<unsigned long long>(seed),
                             to_string(r.status), r.metrics.uav_count);
            } catch (...) {
                std::lock_guard lock(io);
                error = std::current_exception();
                next = count;
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }

    Stat uavs, link, max_link, dev, angle, angle_err, deploy, sim, search;
    std::size_t complete = 0;
    for (const auto& r : rows) {
        complete += r.status == RunStatus::Complete;
        uavs.add(static_cast<double>(r.metrics.uav_count));
        link.add(r.metrics.mean_link_excluding_final);
        max_link.add(r.metrics.max_link);
        dev.add(r.metrics.mean_deviation);
        angle.add(r.metrics.mean_los_angle);
        angle_err.add(r.metrics.mean_target_angle_error);
        deploy.add(r.mean_deployment_time);
        sim.add(r.metrics.total_time);
        search.add(r.search_seconds);
    }
    std::printf("scenario: %s  seeds %llu..%llu  runs %zu  complete %zu\n", sc.name.c_str(),
                static_cast<unsigned long long>(first), static_cast<unsigned long long>(last), count, complete);
    std::printf("%-34s %12s %12s\n", "metric", "mean", "stddev");
    auto line = [](const char* name, const Stat& s) { std::printf("%-34s %12.4f %12.4f\n", name, s.mean(), s.stddev()); };
    line("uav_count", uavs);
    line("mean_link_length_excluding_final", link);
    line("max_link_length", max_link);
    line("mean_deviation_m", dev);
    line("mean_target_angle_rad", angle);
    line("mean_bearing_error_rad", angle_err);
    line("mean_deployment_time_s", deploy);
    line("simulated_total_time_s", sim);
    line("search_wall_time_s", search);

    if (!out.empty()) {
        std::ofstream csv(fs::path(out) / "sweep.csv");
        csv << Provenance::of(sc, first).comment_line() << "\n"
            << "seed,status,uav_count,mean_link_excluding_final,max_link,mean_deviation,mean_target_angle,"
               "mean_bearing_error,mean_deployment_time,simulated_time,search_wall_time\n";
        for (const auto& r : rows) {
            csv << r.seed << ',' << to_string(r.status) << ',' << r.metrics.uav_count << ','
                << r.metrics.mean_link_excluding_final << ',' << r.metrics.max_link << ',' << r.metrics.mean_deviation
                << ',' << r.metrics.mean_los_angle << ',' << r.metrics.mean_target_angle_error << ','
                << r.mean_deployment_time << ',' << r.metrics.total_time << ',' << r.search_seconds << '\n';
        }
    }
    return complete == count ? kOk : kRunFailure;
}

struct GenTerrain {
    std::string kind = "rolling";
    std::string out;
    TerrainSpec spec;
};

int cmd_gen_terrain(const GenTerrain& g) {
    TerrainSpec spec = g.spec;
    if (g.kind == "flat") {
        spec.kind = TerrainSpec::Kind::Flat;
    } else if (g.kind == "ramp") {
        spec.kind = TerrainSpec::Kind::Ramp;
    } else {
        spec.kind = TerrainSpec::Kind::Rolling;
    }
    const Terrain t = spec.build();
    if (g.out.empty() || g.out == "-") {
        t.write(std::cout);
    } else {
        std::ofstream out(g.out, std::ios::binary);
        if (!out) {
            throw std::runtime_error(g.out + ": cannot write");
        }
        t.write(out);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relay-UAV route deployment over terrain with obstacles"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool timing = false;
    auto* run = app.add_subcommand("run", "run one deployment and write its artifacts");
    run->add_option("scenario", scenario_path, "scenario file (.toml or .json)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "master seed (default: the scenario's run.master_seed)");
    run->add_option("--out", out, "output directory (default: $UAVNET_OUT_DIR/<name>-seed<N>, else runs/...)");
    run->add_flag("--timing", timing, "also write timing.json with wall-clock search times");

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "re-check a run directory from its files alone");
    verify->add_option("out-dir", verify_dir, "directory written by run")->required()->check(CLI::ExistingDirectory);

    std::string seeds;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "repeat a scenario over a seed range and aggregate metrics");
    sweep->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seeds", seeds, "inclusive seed range A..B")->required();
    sweep->add_option("--out", out, "write each run to <DIR>/seed_<N> plus sweep.csv");
    sweep->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    GenTerrain gen;
    auto* gt = app.add_subcommand("gen-terrain", "write a synthetic terrain file");
    gt->add_option("--kind", gen.kind, "flat, ramp or rolling")->check(CLI::IsMember({"flat", "ramp", "rolling"}));
    gt->add_option("-o,--out", gen.out, "output path (default: stdout)");
    gt->add_option("--rows", gen.spec.rows, "grid rows");
    gt->add_option("--cols", gen.spec.cols, "grid columns");
    gt->add_option("--cell-size", gen.spec.cell_size, "node spacing (m)");
    gt->add_option("--origin-x", gen.spec.origin.x, "x of node (0, 0)");
    gt->add_option("--origin-y", gen.spec.origin.y, "y of node (0, 0)");
    gt->add_option("--base-height", gen.spec.base_height, "base elevation (m)");
    gt->add_option("--slope-x", gen.spec.slope_x, "ramp slope along x");
    gt->add_option("--slope-y", gen.spec.slope_y, "ramp slope along y");
    gt->add_option("--amplitude", gen.spec.amplitude, "rolling relief (m)");
    gt->add_option("--feature-size", gen.spec.feature_size, "rolling feature spacing (m)");
    gt->add_option("--seed", gen.spec.seed, "rolling seed");

    bool as_json = false;
    auto* show = app.add_subcommand("scenario", "print a scenario with every default filled in");
    show->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    show->add_flag("--json", as_json, "print JSON instead of TOML");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            return cmd_run(scenario_path, seed, out, timing);
        }
        if (*verify) {
            return cmd_verify(verify_dir);
        }
        if (*sweep) {
            return cmd_sweep(scenario_path, seeds, out, jobs);
        }
        if (*gt) {
            return cmd_gen_terrain(gen);
        }
        if (*show) {
            const Scenario sc = load_scenario(scenario_path);
            std::cout << (as_json ? scenario_to_json(sc).dump(2) + "\n" : scenario_to_toml(sc));
            return kOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kUsage;
}
