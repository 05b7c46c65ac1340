#include "uavnet/scenario_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "uavnet/toml_lite.hpp"

namespace uavnet {

using nlohmann::json;

namespace {

json vec(Vec2 v) { return json::array({v.x, v.y}); }
json vec(Vec3 v) { return json::array({v.x, v.y, v.z}); }

// Typed, path-aware access to one table; remembers which keys were read so leftovers can be
// reported as unknown fields.
class Table {
  public:
    Table(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            fail("", "expected a table");
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ScenarioError(field(key) + ": " + what);
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
    }

    const json* get(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) {
                fail(key, "expected a number");
            }
            out = v->get<double>();
        }
    }

    template <class Int>
    void count(const std::string& key, Int& out) {
        if (const json* v = get(key)) {
            if (v->is_number_unsigned()) {
                out = static_cast<Int>(v->get<std::uint64_t>());
            } else if (v->is_number_integer()) {
                if (v->get<std::int64_t>() < 0) {
                    fail(key, "expected a non-negative integer");
                }
                out = static_cast<Int>(v->get<std::int64_t>());
            } else {
                fail(key, "expected an integer");
            }
        }
    }

    void text(const std::string& key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) {
                fail(key, "expected a string");
            }
            out = v->get<std::string>();
        }
    }

    template <std::size_t N>
    std::array<double, N> array(const std::string& key, const json& v) {
        if (!v.is_array() || v.size() != N ||
            std::any_of(v.begin(), v.end(), [](const json& e) { return !e.is_number(); })) {
            fail(key, "expected an array of " + std::to_string(N) + " numbers");
        }
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = v[i].get<double>();
        }
        return out;
    }

    void point(const std::string& key, Vec2& out) {
        if (const json* v = get(key)) {
            const auto a = array<2>(key, *v);
            out = {a[0], a[1]};
        }
    }

    void point(const std::string& key, Vec3& out) {
        if (const json* v = get(key)) {
            const auto a = array<3>(key, *v);
            out = {a[0], a[1], a[2]};
        }
    }

    std::optional<Table> sub(const std::string& key) {
        if (const json* v = get(key)) {
            return Table(*v, field(key));
        }
        return std::nullopt;
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) {
                fail(k, "unknown field");
            }
        }
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

TerrainSpec::Kind terrain_kind(Table& t) {
    std::string kind = "flat";
    t.text("kind", kind);
    for (auto k : {TerrainSpec::Kind::File, TerrainSpec::Kind::Flat, TerrainSpec::Kind::Ramp,
                   TerrainSpec::Kind::Rolling}) {
        if (kind == to_string(k)) {
            return k;
        }
    }
    t.fail("kind", "expected one of file, flat, ramp, rolling");
}

TerrainSpec read_terrain(Table t) {
    TerrainSpec s;
    s.kind = terrain_kind(t);
    if (s.kind == TerrainSpec::Kind::File) {
        t.text("path", s.path);
        if (s.path.empty()) {
            t.fail("path", "required for kind 'file'");
        }
        t.finish();
        return s;
    }
    t.point("origin", s.origin);
    t.number("cell_size", s.cell_size);
    t.count("rows", s.rows);
    t.count("cols", s.cols);
    t.number("base_height", s.base_height);
    if (s.kind == TerrainSpec::Kind::Ramp) {
        t.number("slope_x", s.slope_x);
        t.number("slope_y", s.slope_y);
    }
    if (s.kind == TerrainSpec::Kind::Rolling) {
        t.number("amplitude", s.amplitude);
        t.number("feature_size", s.feature_size);
        t.count("seed", s.seed);
    }
    t.finish();
    return s;
}

Obstacle read_obstacle(Table t) {
    Obstacle o;
    t.text("id", o.id);
    t.point("center", o.center);
    t.number("radius", o.radius);
    t.number("base_height", o.base_height);
    t.number("top_height", o.top_height);
    for (const char* key : {"id", "center", "radius", "top_height"}) {
        if (!t.has(key)) {
            t.fail(key, "required");
        }
    }
    t.finish();
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ScenarioError(path + ": cannot open");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_of(const std::string& path) {
    const std::string ext = std::filesystem::path(path).extension().string();
    return ext == ".json" ? "json" : "toml";
}

} // namespace

json scenario_to_json(const Scenario& s) {
    json terrain{{"kind", to_string(s.terrain.kind)}};
    if (s.terrain.kind == TerrainSpec::Kind::File) {
        terrain["path"] = s.terrain.path;
    } else {
        terrain["origin"] = vec(s.terrain.origin);
        terrain["cell_size"] = s.terrain.cell_size;
        terrain["rows"] = s.terrain.rows;
        terrain["cols"] = s.terrain.cols;
        terrain["base_height"] = s.terrain.base_height;
    }
    if (s.terrain.kind == TerrainSpec::Kind::Ramp) {
        terrain["slope_x"] = s.terrain.slope_x;
        terrain["slope_y"] = s.terrain.slope_y;
    }
    if (s.terrain.kind == TerrainSpec::Kind::Rolling) {
        terrain["amplitude"] = s.terrain.amplitude;
        terrain["feature_size"] = s.terrain.feature_size;
        terrain["seed"] = s.terrain.seed;
    }

    json obstacles = json::array();
    for (const auto& o : s.obstacles) {
        obstacles.push_back({{"id", o.id},
                             {"center", vec(o.center)},
                             {"radius", o.radius},
                             {"base_height", o.base_height},
                             {"top_height", o.top_height}});
    }

    return {
        {"name", s.name},
        {"base", vec(s.base)},
        {"destination", vec(s.destination)},
        {"environment",
         {{"terrain", terrain},
          {"obstacles", obstacles},
          {"bounds", {{"min", vec(s.bounds.min)}, {"max", vec(s.bounds.max)}}}}},
        {"uav",
         {{"size_d", s.uav.size_d},
          {"safe_margin", s.uav.safe_margin},
          {"comm_range", s.uav.comm_range},
          {"sense_range", s.uav.sense_range},
          {"max_speed", s.uav.max_speed},
          {"altitude_min", s.uav.altitude_min}}},
        {"pso",
         {{"population", s.pso.population},
          {"iter_max", s.pso.iter_max},
          {"inertia", s.pso.inertia},
          {"inertia_damping", s.pso.inertia_damping},
          {"c1", s.pso.c1},
          {"c2", s.pso.c2},
          {"velocity_max_fraction", s.pso.velocity_max_fraction},
          {"init_retries", s.pso.init_retries},
          {"explore",
           {{"boundary_margin", s.explore.boundary_margin},
            {"boundary_tolerance_fraction", s.explore.boundary_tolerance_fraction},
            {"max_steps", s.explore.max_steps}}}}},
        {"behavior",
         {{"a_m2g", s.gains.a_m2g},
          {"b_m2g", s.gains.b_m2g},
          {"a_ath", s.gains.a_ath},
          {"b_ath", s.gains.b_ath},
          {"a_adr", s.gains.a_adr},
          {"b_adr", s.gains.b_adr}}},
        {"weights", {{"b1", s.weights.b1}, {"b2", s.weights.b2}, {"b3", s.weights.b3}, {"b4", s.weights.b4}}},
        {"run",
         {{"uav_budget", s.uav_budget},
          {"dt", s.dt},
          {"tick_budget", s.tick_budget},
          {"master_seed", s.master_seed}}},
    };
}

Scenario scenario_from_json(const json& doc) {
    Scenario s;
    Table root(doc, "");
    root.text("name", s.name);
    for (const char* key : {"base", "destination"}) {
        if (!root.has(key)) {
            root.fail(key, "required");
        }
    }
    root.point("base", s.base);
    root.point("destination", s.destination);

    if (auto env = root.sub("environment")) {
        if (auto t = env->sub("terrain")) {
            s.terrain = read_terrain(*t);
        }
        if (const json* list = env->get("obstacles")) {
            if (!list->is_array()) {
                env->fail("obstacles", "expected an array of tables");
            }
            for (std::size_t i = 0; i < list->size(); ++i) {
                s.obstacles.push_back(read_obstacle(Table((*list)[i], env->field("obstacles") + "[" + std::to_string(i) + "]")));
            }
        }
        if (auto b = env->sub("bounds")) {
            b->point("min", s.bounds.min);
            b->point("max", s.bounds.max);
            b->finish();
        }
        env->finish();
    }
    if (auto u = root.sub("uav")) {
        u->number("size_d", s.uav.size_d);
        u->number("safe_margin", s.uav.safe_margin);
        u->number("comm_range", s.uav.comm_range);
        u->number("sense_range", s.uav.sense_range);
        u->number("max_speed", s.uav.max_speed);
        u->number("altitude_min", s.uav.altitude_min);
        u->finish();
    }
    if (auto p = root.sub("pso")) {
        p->count("population", s.pso.population);
        p->count("iter_max", s.pso.iter_max);
        p->number("inertia", s.pso.inertia);
        p->number("inertia_damping", s.pso.inertia_damping);
        p->number("c1", s.pso.c1);
        p->number("c2", s.pso.c2);
        p->number("velocity_max_fraction", s.pso.velocity_max_fraction);
        p->count("init_retries", s.pso.init_retries);
        if (auto e = p->sub("explore")) {
            e->number("boundary_margin", s.explore.boundary_margin);
            e->number("boundary_tolerance_fraction", s.explore.boundary_tolerance_fraction);
            e->count("max_steps", s.explore.max_steps);
            e->finish();
        }
        p->finish();
    }
    if (auto g = root.sub("behavior")) {
        g->number("a_m2g", s.gains.a_m2g);
        g->number("b_m2g", s.gains.b_m2g);
        g->number("a_ath", s.gains.a_ath);
        g->number("b_ath", s.gains.b_ath);
        g->number("a_adr", s.gains.a_adr);
        g->number("b_adr", s.gains.b_adr);
        g->finish();
    }
    if (auto w = root.sub("weights")) {
        w->number("b1", s.weights.b1);
        w->number("b2", s.weights.b2);
        w->number("b3", s.weights.b3);
        w->number("b4", s.weights.b4);
        w->finish();
    }
    if (auto r = root.sub("run")) {
        r->count("uav_budget", s.uav_budget);
        r->number("dt", s.dt);
        r->count("tick_budget", s.tick_budget);
        r->count("master_seed", s.master_seed);
        r->finish();
    }
    root.finish();
    return s;
}

Scenario parse_scenario(const std::string& text, const std::string& format, const std::string& source) {
    json doc;
    if (format == "json") {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ScenarioError(source + ": " + e.what());
        }
    } else if (format == "toml") {
        try {
            doc = toml::parse(text, source);
        } catch (const toml::ParseError& e) {
            throw ScenarioError(e.what());
        }
    } else {
        throw ScenarioError("unknown scenario format '" + format + "'");
    }
    try {
        return scenario_from_json(doc);
    } catch (const ScenarioError& e) {
        throw ScenarioError(source + ": " + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    Scenario s = parse_scenario(read_file(path), format_of(path), path);
    s.base_dir = std::filesystem::path(path).parent_path().string();
    try {
        s.build_environment();
    } catch (const std::exception& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return s;
}

std::string scenario_to_toml(const Scenario& s) { return toml::dump(scenario_to_json(s)); }

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path + ": cannot write");
    }
    out << (format_of(path) == "json" ? scenario_to_json(s).dump(2) + "\n" : scenario_to_toml(s));
}

std::string scenario_hash(const Scenario& s) {
    std::string bytes = scenario_to_json(s).dump();
    if (s.terrain.kind == TerrainSpec::Kind::File) {
        std::filesystem::path p(s.terrain.path);
        if (p.is_relative() && !s.base_dir.empty()) {
            p = std::filesystem::path(s.base_dir) / p;
        }
        std::ifstream in(p, std::ios::binary);
        bytes += std::string(std::istreambuf_iterator<char>(in), {});
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace uavnet
