#include "uavnet/pso.hpp"

#include <cmath>

namespace uavnet {

void PsoConfig::validate() const {
    if (population < 2) {
        throw std::invalid_argument("pso: population must be >= 2");
    }
    if (iter_max < 1) {
        throw std::invalid_argument("pso: iter_max must be >= 1");
    }
    if (!(inertia >= 0.0) || !(c1 >= 0.0) || !(c2 >= 0.0)) {
        throw std::invalid_argument("pso: inertia, c1, c2 must be >= 0");
    }
    if (!(inertia_damping > 0.0)) {
        throw std::invalid_argument("pso: inertia_damping must be positive");
    }
    if (!(velocity_max_fraction > 0.0)) {
        throw std::invalid_argument("pso: velocity_max_fraction must be positive");
    }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Vec3 sample_ball(std::mt19937_64& rng, Vec3 center, double radius) {
    while (true) {
        const Vec3 u{2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
        if (u.squared_norm() <= 1.0) {
            return center + radius * u;
        }
    }
}

Vec3 sample_region(std::mt19937_64& rng, const SearchRegion& region) {
    constexpr int kMaxRejections = 1000;
    Vec3 p;
    for (int i = 0; i < kMaxRejections; ++i) {
        p = sample_ball(rng, region.center, region.radius);
        if (region.bounds.contains(p)) {
            return p;
        }
    }
    return region.confine(p);
}

void refresh_gbest(Swarm& swarm) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < swarm.particles.size(); ++i) {
        if (swarm.particles[i].pbest_cost < swarm.particles[best].pbest_cost) {
            best = i;
        }
    }
    swarm.gbest_index = best;
    swarm.gbest_cost = swarm.particles[best].pbest_cost;
    swarm.gbest_position = swarm.particles[best].pbest_position;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

Vec3 SearchRegion::confine(Vec3 p) const {
    const Vec3 offset = p - center;
    const double n = offset.norm();
    if (n > radius) {
        p = center + offset * (radius / n);
    }
    // Per-axis clamping moves each coordinate toward the centre's, so the point stays in the ball.
    return bounds.clamp(p);
}

Swarm init_swarm(const SearchRegion& region, const Objective& objective, const PsoConfig& cfg) {
    cfg.validate();
    Swarm swarm;
    swarm.rng.seed(cfg.seed);
    swarm.particles.resize(cfg.population);
    for (std::size_t attempt = 0; attempt <= cfg.init_retries; ++attempt) {
        bool any_feasible = false;
        for (auto& p : swarm.particles) {
            p.position = sample_region(swarm.rng, region);
            p.velocity = {};
            p.pbest_position = p.position;
            p.pbest_cost = objective(p.position);
            any_feasible = any_feasible || p.pbest_cost.is_finite();
        }
        if (any_feasible) {
            refresh_gbest(swarm);
            return swarm;
        }
    }
    throw NoFeasibleCandidate("no feasible candidate in search ball around " + to_string(region.center));
}

Swarm pso_step(Swarm swarm, const SearchRegion& region, const Objective& objective, const PsoConfig& cfg,
               std::size_t iteration) {
    const double w = cfg.inertia * std::pow(cfg.inertia_damping, static_cast<double>(iteration));
    const double v_max = cfg.velocity_max_fraction * region.radius;
    const Vec3 gbest = swarm.gbest_position;
    for (auto& p : swarm.particles) {
        const double r1 = uniform01(swarm.rng);
        const double r2 = uniform01(swarm.rng);
        Vec3 v = w * p.velocity + cfg.c1 * r1 * (p.pbest_position - p.position) + cfg.c2 * r2 * (gbest - p.position);
        const double speed = v.norm();
        if (speed > v_max) {
            v = v * (v_max / speed);
        }
        p.velocity = v;
        p.position = region.confine(p.position + v);
        const Cost c = objective(p.position);
        if (c < p.pbest_cost) {
            p.pbest_cost = c;
            p.pbest_position = p.position;
        }
    }
    refresh_gbest(swarm);
    return swarm;
}

SearchResult search_optimal(const SearchRegion& region, const Objective& objective, const PsoConfig& cfg) {
    Swarm swarm = init_swarm(region, objective, cfg);
    SearchResult result;
    result.trace.reserve(cfg.iter_max);
    for (std::size_t k = 0; k < cfg.iter_max; ++k) {
        swarm = pso_step(std::move(swarm), region, objective, cfg, k);
        result.trace.push_back(swarm.gbest_cost.value());
    }
    result.position = swarm.gbest_position;
    result.cost = swarm.gbest_cost;
    return result;
}

namespace {

SearchRegion relay_region(const FitnessContext& ctx, const Environment& env) {
    return {ctx.current, ctx.params.sense_range, env.bounds()};
}

} // namespace

SearchResult search_optimal(const FitnessContext& ctx, const Environment& env, const PsoConfig& cfg) {
    return search_optimal(relay_region(ctx, env), [&](const Vec3& p) { return total_fitness(p, ctx, env); }, cfg);
}

Swarm init_swarm(const FitnessContext& ctx, const Environment& env, const PsoConfig& cfg) {
    return init_swarm(relay_region(ctx, env), [&](const Vec3& p) { return total_fitness(p, ctx, env); }, cfg);
}

} // namespace uavnet
