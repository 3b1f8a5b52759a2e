// Greedy admission: requests in non-increasing reward/demand order, each
// routed on a minimum-hop path in the residual graph.
#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <vector>

#include "qsat/routing.hpp"
#include "qsat/solution.hpp"

namespace qsat {

/// Batch indices sorted by w/d descending, ties by ascending index.
inline std::vector<int> ratio_order(const RequestBatch& batch) {
    std::vector<int> order(static_cast<std::size_t>(batch.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ra = batch.requests[static_cast<std::size_t>(a)];
        const auto& rb = batch.requests[static_cast<std::size_t>(b)];
        return static_cast<long>(ra.reward) * rb.demand > static_cast<long>(rb.reward) * ra.demand;
    });
    return order;
}

inline Solution greedy_solve(const LogicalGraph& g, const RequestBatch& batch, RoutingRules rules = {}) {
    const auto start = std::chrono::steady_clock::now();
    Solution sol;
    sol.solver = SolverKind::Greedy;
    LogicalGraph residual = g;
    for (int i : ratio_order(batch)) {
        const Request& r = batch.requests[static_cast<std::size_t>(i)];
        const auto [s, t] = request_vertices(g, r);
        auto path = bfs_path(residual, s, t, r.demand, rules);
        if (!path) continue;
        reserve_path(residual, *path);
        sol.served.insert(i);
        sol.total_reward += r.reward;
        sol.paths.emplace(i, std::move(*path));
    }
    sol.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

}  // namespace qsat
