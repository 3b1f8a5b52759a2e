#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace qsat;

TEST(BruteForce, EmptyBatchIsZero) {
    const qsat::testing::Counterexample cx;
    EXPECT_EQ(oracle::brute_force_oed(cx.g, RequestBatch{}), 0);
}

TEST(BruteForce, CounterexampleBeatsGreedy) {
    const qsat::testing::Counterexample cx;
    EXPECT_EQ(oracle::brute_force_oed(cx.g, cx.batch), 8);
    EXPECT_GT(oracle::brute_force_oed(cx.g, cx.batch), greedy_solve(cx.g, cx.batch).total_reward);
}

TEST(BruteForce, SingleRequestMatchesPathExistence) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto inst = qsat::testing::tiny_instance(seed);
        inst.batch.requests.resize(1);
        const auto& r = inst.batch.requests[0];
        const bool exists = bfs_path(inst.g, r.src, r.dst, r.demand, inst.rules).has_value();
        EXPECT_EQ(oracle::brute_force_oed(inst.g, inst.batch, inst.rules), exists ? r.reward : 0) << "seed " << seed;
    }
}

TEST(BruteForce, RefusesLargeInstances) {
    const LogicalGraph big(4, 1, 5, {1, 1, 1});
    EXPECT_THROW(oracle::brute_force_oed(big, RequestBatch{}), std::invalid_argument);
    const qsat::testing::Counterexample cx;
    RequestBatch four;
    for (int i = 0; i < 4; ++i) four.requests.push_back(Request{0, 1, 1, 1, i});
    EXPECT_THROW(oracle::brute_force_oed(cx.g, four), std::invalid_argument);
}

TEST(ChordDistance, TrivialCases) {
    EXPECT_EQ(oracle::chord_distance({10, 20}, {10, 20}), 0.0);
    EXPECT_NEAR(oracle::chord_distance({0, 0}, {0, 180}), 12742.0, 1e-9);
    EXPECT_NEAR(oracle::chord_distance({90, 0}, {-90, 0}), 12742.0, 1e-9);
}

TEST(ChordDistance, AgreesWithRotatingGroundPositions) {
    const auto st = qsat::testing::stations();
    const ConstellationConfig cfg;
    for (int a = 0; a < st.size(); a += 7) {
        for (int b = 1; b < st.size(); b += 11) {
            const double chord = oracle::chord_distance(st.coords[a], st.coords[b]);
            for (double tau : {0.0, 3.7, 11.0, 23.9}) {
                EXPECT_NEAR(distance(ground_position(cfg, st.coords[a], tau), ground_position(cfg, st.coords[b], tau)),
                            chord, 1e-9);
            }
        }
    }
}
