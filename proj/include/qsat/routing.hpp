// Residual-aware path search: minimum-hop BFS and weighted shortest paths.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "qsat/logical_graph.hpp"
#include "qsat/solution.hpp"

namespace qsat {

/// Which vertices and edges a demand-d path may use in the residual graph.
class RouteFilter {
public:
    RouteFilter(const LogicalGraph& g, int s, int t, int demand, RoutingRules rules)
        : g_(g), s_(s), t_(t), d_(demand), rules_(rules) {}

    bool endpoints_ok() const {
        const auto& a = g_.resources(s_);
        const auto& b = g_.resources(t_);
        return a.transmitters >= d_ && a.memories >= d_ && b.receivers >= d_ && b.memories >= d_;
    }
    bool interior_ok(int v) const {
        if (v == s_ || v == t_) return false;
        if (g_.is_ground(v) && !rules_.allow_ground_transit) return false;
        const auto& r = g_.resources(v);
        return r.transmitters >= d_ && r.receivers >= d_ && r.memories >= 2 * d_;
    }
    bool edge_ok(int e) const { return g_.channels(e) >= d_ && (rules_.allow_isl || !g_.is_isl(e)); }

    int source() const { return s_; }
    int target() const { return t_; }
    int demand() const { return d_; }

private:
    const LogicalGraph& g_;
    int s_, t_, d_;
    RoutingRules rules_;
};

/// Minimum-hop s-t path whose every edge and vertex can carry demand d in the
/// residual graph. Neighbors are expanded in ascending vertex id.
inline std::optional<EntanglementPath> bfs_path(const LogicalGraph& g, int s, int t, int demand,
                                                RoutingRules rules = {}) {
    if (s == t) return std::nullopt;
    RouteFilter f(g, s, t, demand, rules);
    if (!f.endpoints_ok()) return std::nullopt;
    std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<int> frontier{s};
    parent[static_cast<std::size_t>(s)] = s;
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int u : frontier) {
            for (const auto& adj : g.neighbors(u)) {
                const int v = adj.to;
                if (parent[static_cast<std::size_t>(v)] != -1 || !f.edge_ok(adj.edge)) continue;
                if (v == t) {
                    parent[static_cast<std::size_t>(v)] = u;
                    EntanglementPath p;
                    p.demand = demand;
                    for (int x = t; x != s; x = parent[static_cast<std::size_t>(x)]) p.vertices.push_back(x);
                    p.vertices.push_back(s);
                    std::reverse(p.vertices.begin(), p.vertices.end());
                    return p;
                }
                if (!f.interior_ok(v)) continue;
                parent[static_cast<std::size_t>(v)] = u;
                next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

/// Per-unit-demand prices on vertex roles and edges. A path's unit cost is
/// tx+mem at the source, rx+mem at the destination, tx+rx+2mem at interior
/// vertices and the channel price of every edge.
struct Prices {
    std::vector<double> tx, rx, mem, ch;

    Prices() = default;
    Prices(int vertices, int edges)
        : tx(static_cast<std::size_t>(vertices), 0.0), rx(static_cast<std::size_t>(vertices), 0.0),
          mem(static_cast<std::size_t>(vertices), 0.0), ch(static_cast<std::size_t>(edges), 0.0) {}

    double interior(int v) const {
        const auto i = static_cast<std::size_t>(v);
        return tx[i] + rx[i] + 2.0 * mem[i];
    }
    double path_cost(const LogicalGraph& g, std::span<const int> vs) const {
        if (vs.size() < 2) return 0.0;
        double c = tx[static_cast<std::size_t>(vs.front())] + mem[static_cast<std::size_t>(vs.front())] +
                   rx[static_cast<std::size_t>(vs.back())] + mem[static_cast<std::size_t>(vs.back())];
        for (std::size_t i = 1; i + 1 < vs.size(); ++i) c += interior(vs[i]);
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) c += ch[static_cast<std::size_t>(*g.find_edge(vs[i], vs[i + 1]))];
        return c;
    }
};

/// Search-effort counter shared by the weighted searches of one solve.
struct SearchStats {
    std::uint64_t shortest_path_calls = 0;
    std::uint64_t arc_scans = 0;
};

/// Secondary per-vertex / per-edge costs that only break ties between
/// equally priced paths. Empty spans mean "count hops".
struct TieCosts {
    std::span<const double> vertex;
    std::span<const double> edge;
};

/// Cheapest feasible path from `from` to the filter's target under `prices`.
/// Paths are compared lexicographically by (price, tie cost), so the price of
/// the result is the exact minimum. Vertices flagged in `blocked_vertex` and
/// edges in `blocked_edges` are skipped. The returned list starts at `from`.
inline std::optional<std::vector<int>> cheapest_path(const LogicalGraph& g, const RouteFilter& f, const Prices& prices,
                                                     int from, const std::vector<char>* blocked_vertex = nullptr,
                                                     std::span<const int> blocked_edges = {},
                                                     SearchStats* stats = nullptr, TieCosts tie = {}) {
    if (stats) ++stats->shortest_path_calls;
    using Key = std::pair<double, double>;
    const auto n = static_cast<std::size_t>(g.vertex_count());
    const int t = f.target();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Key> dist(n, Key{inf, inf});
    std::vector<int> parent(n, -1);
    using Item = std::pair<Key, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(from)] = {0.0, 0.0};
    heap.push({{0.0, 0.0}, from});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        if (u == t) break;
        if (stats) stats->arc_scans += g.neighbors(u).size();
        for (const auto& adj : g.neighbors(u)) {
            const int v = adj.to;
            if (!f.edge_ok(adj.edge)) continue;
            if (!blocked_edges.empty() &&
                std::find(blocked_edges.begin(), blocked_edges.end(), adj.edge) != blocked_edges.end()) {
                continue;
            }
            if (v != t) {
                if (!f.interior_ok(v)) continue;
                if (blocked_vertex && (*blocked_vertex)[static_cast<std::size_t>(v)]) continue;
            }
            const auto e = static_cast<std::size_t>(adj.edge);
            Key nd{d.first + prices.ch[e], d.second + (tie.edge.empty() ? 1.0 : tie.edge[e])};
            if (v != t) {
                nd.first += prices.interior(v);
                if (!tie.vertex.empty()) nd.second += tie.vertex[static_cast<std::size_t>(v)];
            }
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                parent[static_cast<std::size_t>(v)] = u;
                heap.push({nd, v});
            }
        }
    }
    if (parent[static_cast<std::size_t>(t)] == -1) return std::nullopt;
    std::vector<int> path;
    for (int x = t; x != from; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace qsat
