#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uavnet/fitness.hpp"

using namespace uavnet;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Obstacle house(Vec2 c, double r, std::string id = "h") { return {std::move(id), c, r, 0.0, 1000.0}; }

Environment flat_world(std::vector<Obstacle> obs = {}) {
    return Environment(Terrain::flat({0, 0}, 10, 101, 101, 0), std::move(obs), Box3{{0, 0, 0}, {1000, 1000, 800}});
}

// Term-by-term re-implementation used as the oracle.
double ref_f1(Vec3 p, const std::vector<Obstacle>& obs, const UavParams& u) {
    double sum = 0;
    for (const auto& o : obs) {
        if (p.z < o.base_height || p.z > o.top_height) {
            continue;
        }
        const double d = std::sqrt((p.x - o.center.x) * (p.x - o.center.x) + (p.y - o.center.y) * (p.y - o.center.y));
        if (d <= o.radius + u.size_d) {
            return kInf;
        }
        if (d <= o.radius + u.size_d + u.safe_margin) {
            sum += o.radius + u.size_d + u.safe_margin - d;
        }
    }
    return sum;
}

double ref_angle(Vec3 a, Vec3 b) {
    const Vec3 c{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    return std::atan2(std::sqrt(c.x * c.x + c.y * c.y + c.z * c.z), a.x * b.x + a.y * b.y + a.z * b.z);
}

double ref_range(double range, double r) { return r <= range ? std::abs(range - r) : kInf; }

} // namespace

TEST(Cost, RejectsNanAndNegative) {
    EXPECT_THROW(Cost(std::nan("")), DomainError);
    EXPECT_THROW(Cost(-1e-300), DomainError);
    EXPECT_NO_THROW(Cost(0.0));
}

TEST(Cost, InfinityOrdersAboveFiniteAndAbsorbs) {
    EXPECT_GT(Cost::infinite(), Cost(1e300));
    EXPECT_TRUE((Cost(3) + Cost::infinite()).is_infinite());
    EXPECT_EQ(weighted(0.0, Cost::infinite()), Cost::zero());
    EXPECT_TRUE(weighted(1e-9, Cost::infinite()).is_infinite());
    EXPECT_EQ(weighted(2.0, Cost(3)).value(), 6.0);
}

TEST(F1, NoObstaclesIsZero) { EXPECT_EQ(f1_obstacle({1, 2, 3}, std::vector<Obstacle>{}, {}), Cost::zero()); }

TEST(F1, MarginBandIsLinear) {
    UavParams u;
    u.size_d = 1;
    u.safe_margin = 10;
    EXPECT_EQ(f1_obstacle({16, 0, 5}, {house({0, 0}, 10)}, u).value(), 5.0);
}

TEST(F1, CollisionBoundaryIsInfinite) {
    const UavParams u;
    EXPECT_TRUE(f1_obstacle({11, 0, 5}, {house({0, 0}, 10)}, u).is_infinite());
    EXPECT_TRUE(f1_obstacle({3, 0, 5}, {house({0, 0}, 10)}, u).is_infinite());
    EXPECT_NEAR(f1_obstacle({11.000001, 0, 5}, {house({0, 0}, 10)}, u).value(), 10.0, 1e-5);
}

TEST(F1, ZeroAtAndBeyondOuterEdge) {
    const UavParams u;
    EXPECT_EQ(f1_obstacle({21, 0, 5}, {house({0, 0}, 10)}, u).value(), 0.0);
    EXPECT_EQ(f1_obstacle({40, 0, 5}, {house({0, 0}, 10)}, u).value(), 0.0);
}

TEST(F1, IgnoresObstaclesAtOtherAltitudes) {
    const UavParams u;
    const Obstacle low{"low", {0, 0}, 10, 0, 50};
    EXPECT_EQ(f1_obstacle({5, 0, 51}, {low}, u).value(), 0.0);
    EXPECT_TRUE(f1_obstacle({5, 0, 50}, {low}, u).is_infinite());
}

TEST(F1, SumsOverObstacles) {
    const UavParams u;
    const std::vector<Obstacle> two{house({0, 0}, 10, "a"), house({40, 0}, 10, "b")};
    EXPECT_DOUBLE_EQ(f1_obstacle({20, 0, 5}, two, u).value(), 2.0);
    EXPECT_DOUBLE_EQ(f1_obstacle({20, 0, 5}, std::vector<Disk>{{{0, 0}, 10, "a"}, {{40, 0}, 10, "b"}}, u).value(), 2.0);
}

TEST(F1, NonIncreasingInDistance) {
    const UavParams u;
    const Obstacle o = house({0, 0}, 7);
    double prev = kInf;
    for (double d = 8.0001; d < 40; d += 0.05) {
        const double v = f1_obstacle({d, 0, 1}, {o}, u).value();
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(F2, CollinearIsZero) { EXPECT_EQ(f2_target_angle({0, 0, 0}, {5, 5, 5}, {20, 20, 20}).value(), 0.0); }

TEST(F2, PerpendicularIsHalfPi) {
    EXPECT_DOUBLE_EQ(f2_target_angle({0, 0, 0}, {0, 3, 0}, {10, 0, 0}).value(), std::numbers::pi / 2);
}

TEST(F2, AntiParallelIsPi) { EXPECT_DOUBLE_EQ(f2_target_angle({1, 1, 1}, {0, 1, 1}, {9, 1, 1}).value(), std::numbers::pi); }

TEST(F2, ZeroLengthIsDomainError) {
    EXPECT_THROW(f2_target_angle({1, 1, 1}, {1, 1, 1}, {5, 5, 5}), DomainError);
    EXPECT_THROW(f2_target_angle({1, 1, 1}, {2, 1, 1}, {1, 1, 1}), DomainError);
}

TEST(F2, ScaleInvariant) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 500; ++k) {
        const Vec3 c{u(rng), u(rng), u(rng)};
        const Vec3 a{u(rng), u(rng), u(rng)};
        const Vec3 b{u(rng), u(rng), u(rng)};
        const double small = f2_target_angle(c, c + a, c + b).value();
        const double big = f2_target_angle(c, c + 1e3 * a, c + 1e3 * b).value();
        EXPECT_NEAR(small, big, 1e-9);
    }
}

TEST(F3, Branches) {
    EXPECT_EQ(f3_sensing({0, 0, 0}, {50, 0, 0}, 50).value(), 0.0);
    EXPECT_EQ(f3_sensing({0, 0, 0}, {0, 40, 0}, 50).value(), 10.0);
    EXPECT_TRUE(f3_sensing({0, 0, 0}, {0, 0, 50.001}, 50).is_infinite());
}

TEST(F4, Branches) {
    EXPECT_EQ(f4_communication({0, 0, 0}, {300, 0, 0}, 300).value(), 0.0);
    EXPECT_EQ(f4_communication({0, 0, 0}, {0, 295, 0}, 300).value(), 5.0);
    EXPECT_TRUE(f4_communication({0, 0, 0}, {300.0001, 0, 0}, 300).is_infinite());
}

TEST(TotalFitness, FlatWorldStepAlongLineOfSight) {
    const Environment env = flat_world();
    FitnessContext ctx{{100, 100, 10}, {0, 100, 10}, {900, 100, 10}, {}, {}, {}};
    // F1 = F2 = F3 = 0; F4 = 300 - 150.
    EXPECT_EQ(total_fitness({150, 100, 10}, ctx, env).value(), 150.0);
}

TEST(TotalFitness, BelowTerrainIsInfinite) {
    const Environment env(Terrain::flat({0, 0}, 10, 101, 101, 50), {}, Box3{{0, 0, 0}, {1000, 1000, 800}});
    FitnessContext ctx{{100, 100, 60}, {0, 100, 60}, {900, 100, 60}, {}, {}, {}};
    EXPECT_TRUE(total_fitness({140, 100, 40}, ctx, env).is_infinite());
    EXPECT_TRUE(total_fitness({140, 100, 51.9}, ctx, env).is_infinite());
    EXPECT_TRUE(total_fitness({140, 100, 52}, ctx, env).is_finite());
}

TEST(TotalFitness, OutsideBoundsIsInfinite) {
    const Environment env = flat_world();
    FitnessContext ctx{{990, 100, 10}, {900, 100, 10}, {2000, 100, 10}, {}, {}, {}};
    EXPECT_TRUE(total_fitness({1010, 100, 10}, ctx, env).is_infinite());
}

TEST(TotalFitness, OnlyAngleWeightCollapsesToZeroOnLineOfSight) {
    const Environment env = flat_world();
    FitnessContext ctx{{100, 100, 10}, {0, 100, 10}, {900, 100, 10}, {}, {}, {0, 1, 0, 0}};
    EXPECT_EQ(total_fitness({120, 100, 10}, ctx, env).value(), 0.0);
}

TEST(TotalFitness, CandidateAtSearchCentreIsInfinite) {
    const Environment env = flat_world();
    FitnessContext ctx{{100, 100, 10}, {0, 100, 10}, {900, 100, 10}, {}, {}, {}};
    EXPECT_TRUE(total_fitness({100, 100, 10}, ctx, env).is_infinite());
}

TEST(TotalFitness, MatchesTermByTermOracle) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Obstacle> obs;
    for (int i = 0; i < 6; ++i) {
        obs.push_back({"o" + std::to_string(i), {300 + 300 * u(rng), 300 + 300 * u(rng)}, 5 + 20 * u(rng), 0,
                       100 + 300 * u(rng)});
    }
    const Environment env = flat_world(obs);
    std::size_t finite = 0;
    for (int k = 0; k < 5000; ++k) {
        FitnessContext ctx;
        ctx.current = {300 + 300 * u(rng), 300 + 300 * u(rng), 20 + 200 * u(rng)};
        ctx.previous_node = ctx.current + Vec3{-250 * u(rng), -250 * u(rng), 0};
        ctx.target = {950, 950, 50};
        ctx.obstacles = obs;
        ctx.weights = {u(rng), u(rng), u(rng), u(rng)};
        const Vec3 cand = ctx.current + Vec3{120 * u(rng) - 60, 120 * u(rng) - 60, 120 * u(rng) - 60};
        const auto& w = ctx.weights;
        double expect = kInf;
        if (cand.z >= 2 && cand.z <= 800) {
            const double f1 = ref_f1(cand, obs, ctx.params);
            const double f3 = ref_range(50, distance(cand, ctx.current));
            const double f4 = ref_range(300, distance(cand, ctx.previous_node));
            if (std::isfinite(f1) && std::isfinite(f3) && std::isfinite(f4)) {
                const double f2 = ref_angle(cand - ctx.current, ctx.target - ctx.current);
                expect = w.b1 * f1 + w.b2 * f2 + w.b3 * f3 + w.b4 * f4;
            }
        }
        const Cost got = total_fitness(cand, ctx, env);
        if (std::isinf(expect)) {
            EXPECT_TRUE(got.is_infinite());
        } else {
            ++finite;
            EXPECT_NEAR(got.value(), expect, 1e-9 * std::max(1.0, expect));
        }
    }
    EXPECT_GT(finite, 500u);
}

TEST(TotalFitness, InfiniteTermWithPositiveWeightDominates) {
    const Environment env = flat_world({house({130, 100}, 10)});
    FitnessContext ctx{{100, 100, 10}, {0, 100, 10}, {900, 100, 10}, {house({130, 100}, 10)}, {}, {1e-6, 1, 1, 1}};
    EXPECT_TRUE(total_fitness({125, 100, 10}, ctx, env).is_infinite());
    ctx.weights.b1 = 0;
    EXPECT_TRUE(total_fitness({125, 100, 10}, ctx, env).is_finite());
    ctx.weights = {1, 1, 1e-6, 1};
    EXPECT_TRUE(total_fitness({100, 100, 70}, ctx, env).is_infinite());
}

TEST(FitnessWeights, Validation) {
    EXPECT_NO_THROW((FitnessWeights{}.validate()));
    EXPECT_THROW((FitnessWeights{-1, 1, 1, 1}.validate()), std::invalid_argument);
    EXPECT_THROW((FitnessWeights{0, 0, 0, 0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((FitnessWeights{0, 0, 0, 0.5}.validate()));
}
