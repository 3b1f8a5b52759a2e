// Shared instances for the unit tests and the acceptance suite.
#pragma once

#include <random>
#include <string>

#include "qsat/harness.hpp"
#include "qsat/oracle.hpp"

namespace qsat::testing {

inline StationSet stations() { return load_stations(std::string(QSAT_DATA_DIR) + "/ground_stations.csv"); }

inline PhysicalNetwork network(int rings, int sats_per_ring, const StationSet& st) {
    ConstellationConfig cfg;
    cfg.rings = rings;
    cfg.sats_per_ring = sats_per_ring;
    return PhysicalNetwork{cfg, st.coords};
}

// Stations A=0 B=1 C=2 D=3, satellites X=4 Y=5. A-B can route through X or Y,
// C-D only through X, and X has room for one path. Greedy takes A-X-B (the
// higher ratio, lower neighbor id) and strands C-D; the optimum routes A-Y-B.
struct Counterexample {
    LogicalGraph g{4, 1, 2, {10, 10, 10}};
    RequestBatch batch;
    static constexpr int A = 0, B = 1, C = 2, D = 3, X = 4, Y = 5;

    Counterexample() {
        for (auto [a, b] : {std::pair{A, X}, {X, B}, {C, X}, {X, D}, {A, Y}, {Y, B}}) g.add_edge(a, b, 1);
        g.set_resources(X, {1, 1, 2});
        batch.requests = {Request{A, B, 1, 5, 0}, Request{C, D, 1, 3, 1}};
    }
};

struct TinyInstance {
    LogicalGraph g;
    RequestBatch batch;
    RoutingRules rules;
};

// At most 8 vertices and 3 requests; channels and resources in small ranges
// so that capacity actually binds.
inline TinyInstance tiny_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int ground = uni(2, 4);
    const int sats = uni(1, 8 - ground);
    LogicalGraph g(ground, 1, sats, {0, 0, 0});
    const int n = g.vertex_count();
    for (int v = 0; v < n; ++v) g.set_resources(v, {uni(0, 4), uni(0, 4), uni(0, 6)});
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (g.is_ground(a) && g.is_ground(b)) continue;
            if (uni(0, 99) < 55) g.add_edge(a, b, uni(1, 3));
        }
    }
    RequestBatch batch;
    const int k = uni(1, 3);
    for (int i = 0; i < k; ++i) {
        const int s = uni(0, ground - 1);
        int t = uni(0, ground - 2);
        if (t >= s) ++t;
        batch.requests.push_back(Request{s, t, uni(1, 2), uni(1, 6), i});
    }
    RoutingRules rules{uni(0, 3) != 0, uni(0, 3) == 0};
    return {std::move(g), std::move(batch), rules};
}

}  // namespace qsat::testing
