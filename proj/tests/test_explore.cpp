#include <gtest/gtest.h>

#include <random>

#include "uavnet/explore.hpp"

using namespace uavnet;

namespace {

Environment flat_world(std::vector<Obstacle> obs = {}) {
    return Environment(Terrain::flat({0, 0}, 10, 121, 121, 0), std::move(obs), Box3{{0, 0, 0}, {1200, 1200, 800}});
}

} // namespace

TEST(Explore, FlatWorldFarTargetReachesTheBoundary) {
    const Environment env = flat_world();
    const Vec3 anchor{100, 600, 20};
    const auto r = explore_to_boundary(anchor, anchor, {1100, 600, 20}, env, {}, {}, {}, {}, 3, 0);
    EXPECT_TRUE(r.complete);
    EXPECT_FALSE(r.destination_reached);
    EXPECT_GE(r.intermediates.size(), 5u);
    EXPECT_LE(r.intermediates.size(), 7u);
    const double reach = distance(anchor, r.final_position);
    EXPECT_GE(reach, 295.0);
    EXPECT_LE(reach, 300.0);
}

TEST(Explore, FirstStepIsOneSensingRadius) {
    const Environment env = flat_world();
    const Vec3 anchor{100, 600, 20};
    const auto r = explore_to_boundary(anchor, anchor, {1100, 600, 20}, env, {}, {}, {}, {}, 5, 1);
    ASSERT_FALSE(r.intermediates.empty());
    EXPECT_NEAR(distance(anchor, r.intermediates.front()), 50.0, 0.5);
}

TEST(Explore, NearbyTargetEndsAtDestination) {
    const Environment env = flat_world();
    const Vec3 start{500, 500, 20};
    const auto r = explore_to_boundary(start, start, {540, 500, 20}, env, {}, {}, {}, {}, 1, 0);
    EXPECT_TRUE(r.destination_reached);
    EXPECT_EQ(r.stop, ExploreStop::Destination);
    EXPECT_LE(r.intermediates.size(), 1u);
    EXPECT_EQ(r.final_position, (Vec3{540, 500, 20}));
}

TEST(Explore, DestinationBelowClearanceIsLifted) {
    const Environment env = flat_world();
    const Vec3 start{500, 500, 20};
    const auto r = explore_to_boundary(start, start, {530, 500, 0}, env, {}, {}, {}, {}, 1, 0);
    EXPECT_TRUE(r.destination_reached);
    EXPECT_EQ(r.final_position, (Vec3{530, 500, 2}));
}

TEST(Explore, StartBeyondRangeIsRejected) {
    const Environment env = flat_world();
    EXPECT_THROW(explore_to_boundary({0, 0, 10}, {400, 0, 10}, {900, 0, 10}, env, {}, {}, {}), DomainError);
}

TEST(Explore, BlockedStartReportsIncomplete) {
    // A house wide enough to swallow the whole sensing ball.
    const Environment env = flat_world({{"wall", {500, 500}, 120, 0, 800}});
    const Vec3 start{500, 500, 20};
    const auto r = explore_to_boundary(start, start, {1100, 500, 20}, env, {}, {}, {});
    EXPECT_FALSE(r.complete);
    EXPECT_EQ(r.stop, ExploreStop::Blocked);
}

TEST(Explore, ChainInvariantsHoldAmongObstacles) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Obstacle> obs;
        for (int i = 0; i < 8; ++i) {
            obs.push_back({"o" + std::to_string(i), {200 + 500 * u(rng), 450 + 300 * u(rng)}, 5 + 25 * u(rng), 0, 800});
        }
        const Environment env(Terrain::rolling({0, 0}, 10, 121, 121, 0, 50, 150, trial + 3), obs,
                              Box3{{0, 0, 0}, {1200, 1200, 800}});
        const Vec3 anchor{100, 600, env.ground_height({100, 600}) + 20};
        const Vec3 dest{1100, 600, 30};
        const UavParams p;
        const auto r = explore_to_boundary(anchor, anchor, dest, env, p, {}, {}, {}, trial, 0);
        ASSERT_TRUE(r.complete);
        Vec3 prev = anchor;
        for (const auto& q : r.intermediates) {
            EXPECT_LE(distance(prev, q), p.sense_range * (1 + 1e-12));
            EXPECT_LE(distance(anchor, q), p.comm_range * (1 + 1e-12));
            for (const auto& o : obs) {
                EXPECT_GT((q.xy() - o.center).norm(), o.radius + p.size_d);
            }
            prev = q;
        }
        EXPECT_LE(distance(anchor, r.final_position), p.comm_range);
        EXPECT_EQ(r.searches.size(), r.intermediates.size() + (r.stop == ExploreStop::MarginRejected ? 1 : 0));
    }
}

TEST(Explore, IncrementalExplorerMatchesBatchRun) {
    const Environment env = flat_world({{"a", {250, 610}, 15, 0, 800}});
    const Vec3 anchor{100, 600, 20};
    const Vec3 dest{1100, 600, 20};
    const auto batch = explore_to_boundary(anchor, anchor, dest, env, {}, {}, {}, {}, 8, 2);
    BoundaryExplorer ex(env, {}, {}, {}, {}, anchor, anchor, dest, 8, 2);
    std::vector<Vec3> legs;
    while (auto leg = ex.next()) {
        legs.push_back(leg->target);
        if (leg->is_final) {
            EXPECT_TRUE(ex.done());
        }
    }
    EXPECT_EQ(ex.final_position(), batch.final_position);
    EXPECT_EQ(ex.intermediates(), batch.intermediates);
    ASSERT_FALSE(legs.empty());
    EXPECT_EQ(legs.back(), batch.final_position);
}
