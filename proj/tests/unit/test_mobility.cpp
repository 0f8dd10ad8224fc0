#include <gtest/gtest.h>

#include "vanet/mobility.hpp"

using namespace vanet;

TEST(Mobility, PaperPlacementInsideArena)
{
    MobilityConfig cfg;  // 15 nodes, 800 x 800
    const auto vs = initial_placement(cfg);
    ASSERT_EQ(vs.size(), 15u);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        EXPECT_EQ(raw(vs[i].id), i);
        EXPECT_GE(vs[i].position.x, 0.0);
        EXPECT_LE(vs[i].position.x, 800.0);
        EXPECT_GE(vs[i].position.y, 0.0);
        EXPECT_LE(vs[i].position.y, 800.0);
    }
}

TEST(Mobility, DegenerateUnitArena)
{
    MobilityConfig cfg;
    cfg.node_count = 1;
    cfg.arena_width = cfg.arena_height = 1.0;
    const auto vs = initial_placement(cfg);
    ASSERT_EQ(vs.size(), 1u);
    EXPECT_TRUE(inside_arena(vs[0].position, cfg));
}

TEST(Mobility, SameSeedSamePlacement)
{
    MobilityConfig cfg;
    cfg.rng_seed = 99;
    const auto a = initial_placement(cfg);
    const auto b = initial_placement(cfg);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].position, b[i].position);  // bit-identical
    }
    cfg.rng_seed = 100;
    EXPECT_NE(initial_placement(cfg)[0].position, a[0].position);
}

TEST(Mobility, RejectsInvalidConfig)
{
    MobilityConfig cfg;
    cfg.node_count = 0;
    EXPECT_THROW(RandomWaypoint{cfg}, ValidationError);
    cfg = {};
    cfg.speed_min = 10;
    cfg.speed_max = 5;
    EXPECT_THROW(RandomWaypoint{cfg}, ValidationError);
    cfg = {};
    cfg.arena_width = 0;
    EXPECT_THROW(initial_placement(cfg), ValidationError);
}

TEST(Mobility, ZeroSpeedNeverMoves)
{
    MobilityConfig cfg;
    cfg.speed_min = cfg.speed_max = 0.0;
    RandomWaypoint model(cfg);
    auto vs = model.initial_placement();
    const auto start = vs;
    for (int i = 0; i < 100; ++i) model.step(vs, 1.0);
    for (std::size_t i = 0; i < vs.size(); ++i) EXPECT_EQ(vs[i].position, start[i].position);
}

TEST(Mobility, StraightLineKinematics)
{
    MobilityConfig cfg;
    cfg.node_count = 1;
    RandomWaypoint model(cfg);
    auto vs = model.initial_placement();
    vs[0].position = {0.0, 0.0};
    vs[0].motion = {{100.0, 0.0}, 10.0, 0.0};
    model.step(vs, 1.0);
    EXPECT_DOUBLE_EQ(vs[0].position.x, 10.0);
    EXPECT_DOUBLE_EQ(vs[0].position.y, 0.0);
    EXPECT_DOUBLE_EQ(vs[0].velocity.x, 10.0);
}

TEST(Mobility, PausesOnArrival)
{
    MobilityConfig cfg;
    cfg.node_count = 1;
    cfg.pause_time = 3.0;
    RandomWaypoint model(cfg);
    auto vs = model.initial_placement();
    vs[0].position = {0.0, 0.0};
    vs[0].motion = {{5.0, 0.0}, 10.0, 0.0};
    model.step(vs, 1.0);
    EXPECT_EQ(vs[0].position, (Vec2{5.0, 0.0}));
    model.step(vs, 1.0);
    model.step(vs, 1.0);
    EXPECT_EQ(vs[0].position, (Vec2{5.0, 0.0}));
}

// Containment and the per-tick displacement bound, swept over seeds.
TEST(Mobility, ContainmentAndDisplacementProperty)
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        MobilityConfig cfg;
        cfg.rng_seed = seed;
        cfg.pause_time = seed % 2 == 0 ? 2.0 : 0.0;
        RandomWaypoint model(cfg);
        auto vs = model.initial_placement();
        for (int step = 0; step < 10'000; ++step) {
            const auto before = vs;
            model.step(vs, 1.0);
            for (std::size_t i = 0; i < vs.size(); ++i) {
                ASSERT_TRUE(inside_arena(vs[i].position, cfg)) << "seed " << seed << " step " << step;
                ASSERT_LE(distance(before[i].position, vs[i].position), cfg.speed_max * 1.0 + 1e-9);
            }
        }
    }
}

TEST(Mobility, TrajectoriesAreDeterministic)
{
    MobilityConfig cfg;
    cfg.rng_seed = 5;
    RandomWaypoint m1(cfg);
    RandomWaypoint m2(cfg);
    auto a = m1.initial_placement();
    auto b = m2.initial_placement();
    for (int i = 0; i < 500; ++i) {
        m1.step(a, 1.0);
        m2.step(b, 1.0);
    }
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].position, b[i].position);
}
