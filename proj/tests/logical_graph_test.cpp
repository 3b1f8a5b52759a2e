#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace qsat;

namespace {

LogicalGraph line(int channels = 5) {
    // s=0, t=1, x=2
    LogicalGraph g(2, 1, 1, {10, 10, 10});
    g.add_edge(0, 2, channels);
    g.add_edge(2, 1, channels);
    return g;
}


// Canonical (ring, slot) of (R, K) mapped into (nR, mK).
int lift(const LogicalGraph& small, const LogicalGraph& big, int v, int n, int m) {
    const auto z = small.node(v);
    if (z.is_ground()) return big.vertex(z);
    return big.vertex(NodeId::satellite(z.ring * n, z.slot * m));
}

}  // namespace

TEST(LogicalGraph, RejectsInvalidEdges) {
    LogicalGraph g(2, 1, 2, {1, 1, 1});
    EXPECT_THROW(g.add_edge(0, 1, 1), std::invalid_argument);
    EXPECT_THROW(g.add_edge(2, 2, 1), std::invalid_argument);
    EXPECT_THROW(g.add_edge(0, 2, 0), std::invalid_argument);
    g.add_edge(0, 2, 1);
    EXPECT_THROW(g.add_edge(2, 0, 1), std::invalid_argument);
    EXPECT_THROW(g.add_edge(0, 9, 1), std::out_of_range);
}

TEST(LogicalGraph, VertexNodeMappingIsBijective) {
    const LogicalGraph g(7, 3, 5, {1, 1, 1});
    std::set<int> seen;
    for (int v = 0; v < g.vertex_count(); ++v) {
        EXPECT_EQ(g.vertex(g.node(v)), v);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u + 15u);
    EXPECT_THROW(g.vertex(NodeId::satellite(3, 0)), std::out_of_range);
}

TEST(BuildLogicalGraph, WindowLongerThanAnOrbitLeavesNoEdges) {
    const auto st = qsat::testing::stations();
    const auto g = build_logical_graph(qsat::testing::network(4, 4, st), {0.0, 3.0}, 1);
    EXPECT_EQ(g.vertex_count(), st.size() + 16);
    EXPECT_EQ(g.edge_count(), 0);
}

TEST(BuildLogicalGraph, ChannelsInRangeAndDeterministic) {
    const auto st = qsat::testing::stations();
    const auto net = qsat::testing::network(10, 10, st);
    const auto g = build_logical_graph(net, {0.0, 0.0}, 42);
    ASSERT_GT(g.edge_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        EXPECT_GE(g.channels(e), 1);
        EXPECT_LE(g.channels(e), 5);
        EXPECT_EQ(g.channels(e), edge_channels(42, g.edge(e).v, g.edge(e).u));
    }
    EXPECT_TRUE(g == build_logical_graph(net, {0.0, 0.0}, 42));
    EXPECT_FALSE(g == build_logical_graph(net, {0.0, 0.0}, 43));
}

TEST(BuildLogicalGraph, StructuralInvariants) {
    const auto st = qsat::testing::stations();
    const auto net = qsat::testing::network(8, 9, st);
    const TimeWindow w{2.5, 0.02};
    const auto g = build_logical_graph(net, w, 5);
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : g.edges()) {
        EXPECT_LT(e.u, e.v);
        EXPECT_FALSE(g.is_ground(e.u) && g.is_ground(e.v));
        EXPECT_TRUE(pairs.insert({e.u, e.v}).second);
        EXPECT_TRUE(edge_feasible(net, g.node(e.u), g.node(e.v), w));
    }
}

// Independent count (separate script evaluating the orbit formula directly);
// indicative reference value from the literature is also 16.
TEST(BuildLogicalGraph, SmallConstellationSatelliteEdgeCount) {
    const auto st = qsat::testing::stations();
    const auto g = build_logical_graph(qsat::testing::network(4, 4, st), {1.0, 0.01}, 1);
    EXPECT_EQ(g.sat_sat_edge_count(), 16);
}

// Edges are exactly the pairs within range at every sample.
TEST(BuildLogicalGraph, EdgesMatchPhysicalReachability) {
    const auto st = qsat::testing::stations();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
        const int rk = std::uniform_int_distribution<int>(4, 12)(rng);
        const auto net = qsat::testing::network(rk, rk, st);
        const TimeWindow w{std::uniform_int_distribution<int>(0, 47)(rng) * 0.5, 0.01 * trial};
        const auto g = build_logical_graph(net, w, 1);
        const auto times = window_samples(w, net.cfg.sample_step_h);
        std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
        for (int k = 0; k < 400; ++k) {
            const int a = pick(rng), b = pick(rng);
            if (a == b) continue;
            bool all_in_range = !(g.is_ground(a) && g.is_ground(b));
            const double range = pair_range(net.cfg, g.node(a), g.node(b));
            for (double t : times) {
                all_in_range = all_in_range && distance(net.position(g.node(a), t), net.position(g.node(b), t)) <= range;
            }
            EXPECT_EQ(g.find_edge(a, b).has_value(), all_in_range);
        }
    }
}

TEST(BuildLogicalGraph, SuperGraphUnderConstellationRefinement) {
    const auto st = qsat::testing::stations();
    const auto small = build_logical_graph(qsat::testing::network(5, 5, st), {3.5, 0.05}, 1);
    const auto big = build_logical_graph(qsat::testing::network(10, 15, st), {3.5, 0.05}, 1);
    for (const auto& e : small.edges()) {
        EXPECT_TRUE(big.find_edge(lift(small, big, e.u, 2, 3), lift(small, big, e.v, 2, 3)).has_value());
    }
}

TEST(ReservePath, HandAppliedRoleCosts) {
    auto g = line();
    ASSERT_TRUE(reserve_path(g, {{0, 2, 1}, 1}));
    EXPECT_EQ(g.resources(0), (ResourceProfile{9, 10, 9}));
    EXPECT_EQ(g.resources(2), (ResourceProfile{9, 9, 8}));
    EXPECT_EQ(g.resources(1), (ResourceProfile{10, 9, 9}));
    EXPECT_EQ(g.channels(0), 4);
    EXPECT_EQ(g.channels(1), 4);
}

TEST(ReservePath, SecondReservationExhaustsChannels) {
    auto g = line(5);
    ASSERT_TRUE(reserve_path(g, {{0, 2, 1}, 5}));
    const auto before = g;
    EXPECT_FALSE(reserve_path(g, {{0, 2, 1}, 5}));
    EXPECT_TRUE(g == before);
}

TEST(CheckPathFeasible, MalformedPaths) {
    const auto g = line();
    EXPECT_FALSE(check_path_feasible(g, {{0}, 1}));
    EXPECT_FALSE(check_path_feasible(g, {{0, 2, 0}, 1}));
    EXPECT_FALSE(check_path_feasible(g, {{0, 1}, 1}));
    EXPECT_FALSE(check_path_feasible(g, {{0, 2, 1}, 0}));
    EXPECT_FALSE(check_path_feasible(g, {{0, 2, 7}, 1}));
    EXPECT_TRUE(check_path_feasible(g, {{1, 2, 0}, 1}));
}

TEST(ReservePath, ReleaseRestoresAndBudgetsAddUp) {
    const auto st = qsat::testing::stations();
    const auto g0 = build_logical_graph(qsat::testing::network(10, 10, st), {0.0, 0.0}, 1);
    std::mt19937_64 rng(5);
    auto g = g0;
    std::vector<EntanglementPath> reserved;
    std::uniform_int_distribution<int> ground(0, g.ground_count() - 1);
    for (int k = 0; k < 200; ++k) {
        const int s = ground(rng), t = ground(rng);
        if (s == t) continue;
        auto p = bfs_path(g, s, t, std::uniform_int_distribution<int>(1, 3)(rng), {});
        if (!p) continue;
        const auto before = g;
        ASSERT_TRUE(reserve_path(g, *p));
        release_path(g, *p);
        EXPECT_TRUE(g == before);
        ASSERT_TRUE(reserve_path(g, *p));
        reserved.push_back(*p);
    }
    ASSERT_FALSE(reserved.empty());
    std::vector<ResourceProfile> used(static_cast<std::size_t>(g.vertex_count()));
    for (const auto& p : reserved) {
        for (std::size_t i = 0; i < p.vertices.size(); ++i) {
            const auto c = detail::role_cost(i, p.vertices.size(), p.demand);
            auto& u = used[static_cast<std::size_t>(p.vertices[i])];
            u.transmitters += c.transmitters;
            u.receivers += c.receivers;
            u.memories += c.memories;
        }
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& r = g.resources(v);
        const auto& u = used[static_cast<std::size_t>(v)];
        EXPECT_GE(r.memories, 0);
        EXPECT_EQ(r.transmitters + u.transmitters, 10);
        EXPECT_EQ(r.receivers + u.receivers, 10);
        EXPECT_EQ(r.memories + u.memories, 10);
    }
    for (auto it = reserved.rbegin(); it != reserved.rend(); ++it) release_path(g, *it);
    EXPECT_TRUE(g == g0);
}
