#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavnet/artifacts.hpp"
#include "uavnet/scenario_io.hpp"
#include "uavnet/toml_lite.hpp"

using namespace uavnet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("uavnet_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const char* kSmall = R"(name = "small"
base = [100.0, 600.0, 5.0]
destination = [700.0, 600.0, 5.0]

[environment.terrain]
kind = "flat"
rows = 121
cols = 121

[[environment.obstacles]]
id = "h1"
center = [300.0, 610.0]
radius = 12.0
top_height = 400.0

[environment.bounds]
min = [0.0, 0.0, 0.0]
max = [1200.0, 1200.0, 800.0]

[run]
master_seed = 3
)";

int run_cli(const std::string& args) {
    const int rc = std::system((std::string(UAVNET_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST(Toml, ScalarsTablesAndArrays) {
    const json j = toml::parse(R"(
# comment
a = 1
b = -2.5e1
c = "x\ty"
d = 'raw\n'
e = true
f = [1, 2.5, "s"]
g = { h = 1, i = [true] }
j.k = 3

[t]
u = 18446744073709551615

[[arr]]
v = 1
[arr.sub]
w = 1
[[arr]]
v = 2
[arr.sub]
w = 2
)");
    EXPECT_EQ(j["a"], 1);
    EXPECT_EQ(j["b"], -25.0);
    EXPECT_EQ(j["c"], "x\ty");
    EXPECT_EQ(j["d"], "raw\\n");
    EXPECT_EQ(j["e"], true);
    EXPECT_EQ(j["f"], (json{1, 2.5, "s"}));
    EXPECT_EQ(j["g"]["i"][0], true);
    EXPECT_EQ(j["j"]["k"], 3);
    EXPECT_EQ(j["t"]["u"].get<std::uint64_t>(), 18446744073709551615ull);
    ASSERT_EQ(j["arr"].size(), 2u);
    EXPECT_EQ(j["arr"][1]["sub"]["w"], 2);
}

TEST(Toml, ErrorsCarryLineNumbers) {
    try {
        toml::parse("a = 1\nb = \n", "f.toml");
        FAIL();
    } catch (const toml::ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("f.toml:2:"), std::string::npos);
    }
    EXPECT_THROW(toml::parse("a = 1\na = 2\n"), toml::ParseError);
    EXPECT_THROW(toml::parse("[t]\n[t]\n"), toml::ParseError);
    EXPECT_THROW(toml::parse("d = 1979-05-27\n"), toml::ParseError);
    EXPECT_THROW(toml::parse("s = \"unterminated\n"), toml::ParseError);
}

TEST(Toml, DumpRoundTripsExactly) {
    const json j = {{"name", "r"},
                    {"x", 0.1},
                    {"y", 1e-300},
                    {"n", -7},
                    {"list", {1.5, 2.0}},
                    {"t", {{"inner", {{"z", 3}}}}},
                    {"items", json::array({{{"a", 1}}, {{"a", 2}}})}};
    EXPECT_EQ(toml::parse(toml::dump(j)), j);
}

TEST(Scenario, MinimalFileTakesDefaults) {
    const Scenario s = parse_scenario("base = [1.0, 1.0, 5.0]\ndestination = [500.0, 1.0, 5.0]\n", "toml");
    EXPECT_EQ(s.uav.comm_range, 300.0);
    EXPECT_EQ(s.uav.sense_range, 50.0);
    EXPECT_EQ(s.pso.population, 100u);
    EXPECT_EQ(s.pso.iter_max, 100u);
    EXPECT_EQ(s.gains.a_ath, 30.0);
    EXPECT_EQ(s.gains.b_ath, 15.0);
    EXPECT_EQ(s.dt, 0.1);
    EXPECT_EQ(s.tick_budget, 100000u);
    EXPECT_EQ(s.terrain.kind, TerrainSpec::Kind::Flat);
}

TEST(Scenario, TomlAndJsonRoundTrip) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const Scenario t = parse_scenario(scenario_to_toml(s), "toml");
    const Scenario u = parse_scenario(scenario_to_json(s).dump(), "json");
    EXPECT_EQ(scenario_to_json(s), scenario_to_json(t));
    EXPECT_EQ(scenario_to_json(s), scenario_to_json(u));
    ASSERT_EQ(t.obstacles.size(), 1u);
    EXPECT_EQ(t.obstacles[0].id, "h1");
    EXPECT_EQ(t.obstacles[0].base_height, 0.0);
    EXPECT_EQ(scenario_hash(s), scenario_hash(t));
}

TEST(Scenario, HashChangesWithContent) {
    Scenario s = parse_scenario(kSmall, "toml");
    const std::string h = scenario_hash(s);
    EXPECT_EQ(h.size(), 16u);
    s.uav.comm_range = 299;
    EXPECT_NE(scenario_hash(s), h);
}

TEST(Scenario, UnknownFieldNamesItsPath) {
    try {
        parse_scenario("base = [1.0, 1.0, 5.0]\ndestination = [5.0, 1.0, 5.0]\n[uav]\ncomm_rnage = 3.0\n", "toml");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("uav.comm_rnage"), std::string::npos) << e.what();
    }
}

TEST(Scenario, WrongTypeNamesItsPath) {
    try {
        parse_scenario("base = [1.0, 1.0, 5.0]\ndestination = [5.0, 1.0, 5.0]\n[uav]\ncomm_range = \"far\"\n", "toml");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("uav.comm_range"), std::string::npos) << e.what();
    }
}

TEST(Scenario, SyntaxErrorNamesItsLine) {
    const fs::path dir = scratch("syntax");
    write(dir / "bad.toml", "name = \"x\"\nbase = [1.0, 1.0,, 2.0]\n");
    try {
        load_scenario((dir / "bad.toml").string());
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("bad.toml:2"), std::string::npos) << e.what();
    }
}

TEST(Scenario, BaseBelowTerrainIsRejected) {
    const fs::path dir = scratch("below");
    std::string text = kSmall;
    text.replace(text.find("base = [100.0, 600.0, 5.0]"), 26, "base = [100.0, 600.0, 1.0]");
    write(dir / "s.toml", text);
    try {
        load_scenario((dir / "s.toml").string());
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("base above terrain"), std::string::npos) << e.what();
    }
}

TEST(Scenario, NegativeCommRangeIsRejected) {
    const fs::path dir = scratch("neg");
    write(dir / "s.toml", std::string(kSmall) + "\n[uav]\ncomm_range = -5.0\n");
    EXPECT_THROW(load_scenario((dir / "s.toml").string()), ScenarioError);
}

TEST(Scenario, MissingBaseIsRejected) {
    EXPECT_THROW(parse_scenario("destination = [5.0, 1.0, 5.0]\n", "toml"), ScenarioError);
}

TEST(Scenario, TerrainFileResolvesRelativeToScenario) {
    const fs::path dir = scratch("terrain_file");
    const Terrain t = Terrain::ramp({0, 0}, 10, 61, 61, 0, 0.05, 0);
    { std::ofstream f(dir / "ground.txt"); t.write(f); }
    std::string text = "base = [50.0, 50.0, 20.0]\ndestination = [500.0, 500.0, 60.0]\n"
                       "[environment.terrain]\nkind = \"file\"\npath = \"ground.txt\"\n"
                       "[environment.bounds]\nmin = [0.0, 0.0, 0.0]\nmax = [600.0, 600.0, 400.0]\n";
    write(dir / "s.toml", text);
    const Scenario s = load_scenario((dir / "s.toml").string());
    EXPECT_NEAR(s.build_environment()->ground_height({300, 300}), 15.0, 1e-9);
    // The terrain bytes are part of the identity.
    const std::string h = scenario_hash(s);
    const Terrain t2 = Terrain::ramp({0, 0}, 10, 61, 61, 1, 0.05, 0);
    { std::ofstream f(dir / "ground.txt"); t2.write(f); }
    EXPECT_NE(scenario_hash(s), h);
}

TEST(Artifacts, RepeatedRunsAreByteIdentical) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path a = scratch("bytes_a");
    const fs::path b = scratch("bytes_b");
    write_artifacts(a, s, run_deployment(s, 3), 3);
    write_artifacts(b, s, run_deployment(s, 3), 3);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) {
            continue;
        }
        ++files;
        const fs::path other = b / fs::relative(e.path(), a);
        ASSERT_TRUE(fs::exists(other)) << other;
        EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path();
    }
    EXPECT_GE(files, 5u);
    EXPECT_FALSE(fs::exists(a / "timing.json"));
}

TEST(Artifacts, HeadersCarryProvenance) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path d = scratch("prov");
    const auto paths = write_artifacts(d, s, run_deployment(s, 5), 5);
    const std::string line = Provenance::of(s, 5).comment_line();
    EXPECT_EQ(line, "# uavnet 0.1.0 scenario=" + scenario_hash(s) + " seed=5");
    EXPECT_EQ(slurp(paths.trajectory).rfind(line + "\ntick,uav_id,x,y,z,psi,phase\n", 0), 0u);
    const json m = json::parse(slurp(paths.metrics));
    EXPECT_EQ(m.at("provenance").at("seed"), 5);
    EXPECT_EQ(m.at("provenance").at("scenario_hash"), scenario_hash(s));
    std::ifstream ev(paths.events);
    std::string first;
    std::getline(ev, first);
    EXPECT_EQ(json::parse(first).at("provenance").at("tool"), "uavnet 0.1.0");
}

TEST(Artifacts, SavedScenarioReloadsToSameHash) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path d = scratch("reload");
    const auto paths = write_artifacts(d, s, run_deployment(s, 3), 3);
    Scenario back = load_scenario(paths.scenario.string());
    EXPECT_EQ(back.master_seed, 3u);
    back.master_seed = s.master_seed;
    EXPECT_EQ(scenario_hash(back), scenario_hash(s));
}

TEST(Verify, AcceptsAGenuineRun) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path d = scratch("verify_ok");
    write_artifacts(d, s, run_deployment(s, 3), 3);
    const VerifyReport r = verify_artifacts(d);
    EXPECT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations.front());
    EXPECT_EQ(r.status, "complete");
    EXPECT_GT(r.samples_checked, 0u);
    EXPECT_GE(r.min_obstacle_clearance, 0.0);
    EXPECT_GE(r.min_pair_distance, 2.0);
}

TEST(Verify, CatchesATrajectoryRowInsideAnObstacle) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path d = scratch("verify_bad");
    const auto paths = write_artifacts(d, s, run_deployment(s, 3), 3);
    std::string csv = slurp(paths.trajectory);
    csv += "1,0,300.000000,610.000000,50.000000,0.000000,explore\n";
    write(paths.trajectory, csv);
    const VerifyReport r = verify_artifacts(d);
    EXPECT_FALSE(r.ok());
    EXPECT_LT(r.min_obstacle_clearance, 0.0);
}

TEST(Verify, CatchesMismatchedProvenance) {
    const Scenario s = parse_scenario(kSmall, "toml");
    const fs::path d = scratch("verify_prov");
    const auto paths = write_artifacts(d, s, run_deployment(s, 3), 3);
    std::string csv = slurp(paths.trajectory);
    csv.replace(csv.find("seed=3"), 6, "seed=4");
    write(paths.trajectory, csv);
    EXPECT_FALSE(verify_artifacts(d).ok());
}

TEST(Cli, ExitCodes) {
    const fs::path d = scratch("cli");
    write(d / "s.toml", kSmall);
    write(d / "bad.toml", "base = [\n");
    const std::string scenario = (d / "s.toml").string();
    EXPECT_EQ(run_cli("run " + scenario + " --seed 3 --out " + (d / "out").string()), 0);
    EXPECT_EQ(run_cli("verify " + (d / "out").string()), 0);
    EXPECT_EQ(run_cli("run " + (d / "bad.toml").string() + " --out " + (d / "x").string()), 65);
    EXPECT_EQ(run_cli("run " + (d / "missing.toml").string()), 64);
    EXPECT_EQ(run_cli("frobnicate"), 64);
    EXPECT_EQ(run_cli(""), 64);

    write(d / "out" / "trajectory.csv", slurp(d / "out" / "trajectory.csv") +
                                            "1,0,300.000000,610.000000,50.000000,0.000000,explore\n");
    EXPECT_EQ(run_cli("verify " + (d / "out").string()), 3);

    std::string tiny = kSmall;
    tiny += "uav_budget = 1\n";
    write(d / "tiny.toml", tiny);
    EXPECT_EQ(run_cli("run " + (d / "tiny.toml").string() + " --out " + (d / "tiny").string()), 1);
    std::string slow = kSmall;
    slow += "tick_budget = 20\n";
    write(d / "slow.toml", slow);
    EXPECT_EQ(run_cli("run " + (d / "slow.toml").string() + " --out " + (d / "slow").string()), 2);
}

TEST(Cli, SweepWritesOneDirectoryPerSeedAndASummary) {
    const fs::path d = scratch("sweep");
    write(d / "s.toml", kSmall);
    ASSERT_EQ(run_cli("sweep " + (d / "s.toml").string() + " --seeds 1..3 --jobs 2 --out " + (d / "sw").string()), 0);
    for (int seed = 1; seed <= 3; ++seed) {
        const fs::path run = d / "sw" / ("seed_" + std::to_string(seed));
        ASSERT_TRUE(fs::exists(run / "metrics.json"));
        EXPECT_TRUE(verify_artifacts(run).ok());
    }
    std::ifstream in(d / "sw" / "sweep.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            ++rows;
        }
    }
    EXPECT_EQ(rows, 4u);
}
