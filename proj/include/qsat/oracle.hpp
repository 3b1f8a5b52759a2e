// Independent desk-scale oracles: exhaustive OED and great-circle chords.
// They deliberately share no search code with the solvers.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qsat/logical_graph.hpp"
#include "qsat/requests.hpp"
#include "qsat/solution.hpp"

namespace qsat::oracle {

inline constexpr int kMaxVertices = 8;
inline constexpr int kMaxRequests = 3;

/// Every simple s-t path of the pristine topology obeying the routing rules.
inline std::vector<std::vector<int>> all_simple_paths(const LogicalGraph& g, int s, int t, RoutingRules rules) {
    std::vector<std::vector<int>> out;
    std::vector<int> stack{s};
    std::vector<char> on(static_cast<std::size_t>(g.vertex_count()), 0);
    on[static_cast<std::size_t>(s)] = 1;
    std::function<void(int)> dfs = [&](int u) {
        for (const auto& adj : g.neighbors(u)) {
            const int v = adj.to;
            if (on[static_cast<std::size_t>(v)]) continue;
            if (!rules.allow_isl && g.is_isl(adj.edge)) continue;
            if (v == t) {
                auto p = stack;
                p.push_back(t);
                out.push_back(std::move(p));
                continue;
            }
            if (g.is_ground(v) && !rules.allow_ground_transit) continue;
            on[static_cast<std::size_t>(v)] = 1;
            stack.push_back(v);
            dfs(v);
            stack.pop_back();
            on[static_cast<std::size_t>(v)] = 0;
        }
    };
    dfs(s);
    return out;
}

/// Maximum feasible reward by enumerating every subset of requests and every
/// assignment of simple paths, replayed with check/reserve. Refuses instances
/// beyond 8 vertices or 3 requests.
inline long brute_force_oed(const LogicalGraph& g, const RequestBatch& batch, RoutingRules rules = {}) {
    if (g.vertex_count() > kMaxVertices || batch.size() > kMaxRequests) {
        throw std::invalid_argument("brute_force_oed: instance exceeds enumeration bounds");
    }
    const int n = batch.size();
    std::vector<std::vector<std::vector<int>>> options(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& r = batch.requests[static_cast<std::size_t>(i)];
        options[static_cast<std::size_t>(i)] = all_simple_paths(g, r.src, r.dst, rules);
    }
    long best = 0;
    // choice[i] = -1 (not served) or an index into options[i]
    std::vector<int> choice(static_cast<std::size_t>(n), -1);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            LogicalGraph work = g;
            long reward = 0;
            for (int k = 0; k < n; ++k) {
                const int c = choice[static_cast<std::size_t>(k)];
                if (c < 0) continue;
                const auto& r = batch.requests[static_cast<std::size_t>(k)];
                if (!reserve_path(work, {options[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)], r.demand})) return;
                reward += r.reward;
            }
            best = std::max(best, reward);
            return;
        }
        choice[static_cast<std::size_t>(i)] = -1;
        rec(i + 1);
        for (std::size_t c = 0; c < options[static_cast<std::size_t>(i)].size(); ++c) {
            choice[static_cast<std::size_t>(i)] = static_cast<int>(c);
            rec(i + 1);
        }
        choice[static_cast<std::size_t>(i)] = -1;
    };
    rec(0);
    return best;
}

/// Straight-line distance between two surface points via the haversine
/// central angle.
inline double chord_distance(const GeoCoord& a, const GeoCoord& b, double radius_km = 6371.0) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * rad;
    const double dlon = (b.lon - a.lon) * rad;
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    const double central = 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
    return 2.0 * radius_km * std::sin(central / 2.0);
}

}  // namespace qsat::oracle
