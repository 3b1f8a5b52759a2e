// Solver output, independent feasibility verification, and the flow view of
// a solution used by the exact solver.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsat/logical_graph.hpp"
#include "qsat/requests.hpp"

namespace qsat {

enum class SolverKind { Greedy, Exact, RestrictedExact };

inline const char* to_string(SolverKind k) {
    switch (k) {
        case SolverKind::Greedy: return "greedy";
        case SolverKind::Exact: return "exact";
        case SolverKind::RestrictedExact: return "restricted_exact";
    }
    return "?";
}

/// Routing rules shared by every solver.
struct RoutingRules {
    bool allow_isl = true;
    bool allow_ground_transit = false;
};

struct Solution {
    std::set<int> served;                     ///< request indices
    std::map<int, EntanglementPath> paths;    ///< request index -> path
    long total_reward = 0;
    SolverKind solver = SolverKind::Greedy;
    bool proven_optimal = false;
    double runtime_s = 0.0;
};

struct VerifyReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

/// Endpoint vertices of a request; throws if they are not ground vertices of g.
inline std::pair<int, int> request_vertices(const LogicalGraph& g, const Request& r) {
    if (r.src < 0 || r.src >= g.ground_count() || r.dst < 0 || r.dst >= g.ground_count()) {
        throw std::out_of_range("request endpoint is not a ground station of the graph");
    }
    return {g.vertex(NodeId::ground(r.src)), g.vertex(NodeId::ground(r.dst))};
}

/// Replays every path of `sol` on a copy of the pristine graph and reports each
/// broken rule. Reservations are applied unconditionally and residuals checked
/// afterwards, so the verdict does not depend on replay order.
inline VerifyReport verify_solution(const LogicalGraph& pristine, const RequestBatch& batch, const Solution& sol,
                                    RoutingRules rules = {}) {
    VerifyReport rep;
    auto fail = [&](std::string s) { rep.violations.push_back(std::move(s)); };
    LogicalGraph g = pristine;
    long reward = 0;
    std::set<int> with_path;
    for (const auto& [i, p] : sol.paths) with_path.insert(i);
    if (with_path != sol.served) fail("served-set: served indices and path map keys differ");

    for (const auto& [i, path] : sol.paths) {
        const std::string tag = "request " + std::to_string(i) + ": ";
        if (i < 0 || i >= batch.size()) {
            fail(tag + "unknown-request");
            continue;
        }
        const Request& r = batch.requests[static_cast<std::size_t>(i)];
        reward += r.reward;
        if (path.demand != r.demand) fail(tag + "demand-mismatch");
        for (int v : path.vertices) {
            if (v < 0 || v >= g.vertex_count()) {
                fail(tag + "unknown-vertex");
                goto next_path;
            }
        }
        {
            const auto [s, t] = request_vertices(g, r);
            if (path.vertices.empty() || path.vertices.front() != s || path.vertices.back() != t) {
                fail(tag + "endpoint-mismatch");
            }
            auto edges = detail::path_edges(g, path);
            if (!edges) {
                fail(tag + "malformed-path (not simple or not edge-connected)");
                continue;
            }
            for (std::size_t k = 1; k + 1 < path.vertices.size(); ++k) {
                if (!rules.allow_ground_transit && g.is_ground(path.vertices[k])) fail(tag + "ground-transit");
            }
            for (int e : *edges) {
                if (!rules.allow_isl && g.is_isl(e)) fail(tag + "inter-satellite-link-forbidden");
            }
            detail::apply(g.mutable_state(), path, *edges, +1);
        }
    next_path:;
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (g.channels(e) < 0) {
            fail("channel-capacity: edge " + std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v) +
                 " oversubscribed by " + std::to_string(-g.channels(e)));
        }
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& r = g.resources(v);
        if (r.transmitters < 0) fail("transmitters: vertex " + std::to_string(v));
        if (r.receivers < 0) fail("receivers: vertex " + std::to_string(v));
        if (r.memories < 0) fail("memories: vertex " + std::to_string(v));
    }
    if (reward != sol.total_reward) {
        fail("total-reward: claimed " + std::to_string(sol.total_reward) + ", served sum " + std::to_string(reward));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Flow view

/// Binary multi-commodity flow: x_i per request and the directed arcs (u, v)
/// with f_i(u, v) = 1.
struct FlowAssignment {
    std::vector<int> served;                                ///< x_i in {0, 1}
    std::vector<std::set<std::pair<int, int>>> arcs;        ///< per request

    explicit FlowAssignment(int requests = 0)
        : served(static_cast<std::size_t>(requests), 0), arcs(static_cast<std::size_t>(requests)) {}
};

inline FlowAssignment to_flow_assignment(const Solution& sol, const RequestBatch& batch) {
    FlowAssignment f(batch.size());
    for (const auto& [i, p] : sol.paths) {
        f.served[static_cast<std::size_t>(i)] = 1;
        for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
            f.arcs[static_cast<std::size_t>(i)].insert({p.vertices[k], p.vertices[k + 1]});
        }
    }
    return f;
}

/// Checks the integer multi-commodity flow constraints: net outflow x_i at the
/// source, net inflow x_i at the destination, conservation elsewhere, no
/// antiparallel arcs, pooled channel capacity, and per-vertex transmitter /
/// receiver / memory budgets.
inline VerifyReport check_flow_constraints(const LogicalGraph& g, const RequestBatch& batch, const FlowAssignment& f,
                                           RoutingRules rules = {}) {
    VerifyReport rep;
    auto fail = [&](std::string s) { rep.violations.push_back(std::move(s)); };
    const auto n = static_cast<std::size_t>(g.vertex_count());
    std::vector<long> ch_use(static_cast<std::size_t>(g.edge_count()), 0);
    std::vector<long> tx(n, 0), rx(n, 0), mem(n, 0);
    for (int i = 0; i < batch.size(); ++i) {
        const Request& r = batch.requests[static_cast<std::size_t>(i)];
        const auto [s, t] = request_vertices(g, r);
        const int x = f.served[static_cast<std::size_t>(i)];
        std::vector<int> net(n, 0);  // outflow - inflow
        for (const auto& [u, v] : f.arcs[static_cast<std::size_t>(i)]) {
            auto e = g.find_edge(u, v);
            if (!e) {
                fail("request " + std::to_string(i) + ": arc on missing edge");
                continue;
            }
            if (f.arcs[static_cast<std::size_t>(i)].contains({v, u})) fail("request " + std::to_string(i) + ": antiparallel arcs");
            if (!rules.allow_isl && g.is_isl(*e)) fail("request " + std::to_string(i) + ": inter-satellite link");
            ++net[static_cast<std::size_t>(u)];
            --net[static_cast<std::size_t>(v)];
            ch_use[static_cast<std::size_t>(*e)] += r.demand;
            tx[static_cast<std::size_t>(u)] += r.demand;
            rx[static_cast<std::size_t>(v)] += r.demand;
            mem[static_cast<std::size_t>(u)] += r.demand;
            mem[static_cast<std::size_t>(v)] += r.demand;
        }
        for (std::size_t z = 0; z < n; ++z) {
            const int want = static_cast<int>(z) == s ? x : static_cast<int>(z) == t ? -x : 0;
            if (net[z] != want) fail("request " + std::to_string(i) + ": conservation at vertex " + std::to_string(z));
        }
        if (!rules.allow_ground_transit) {
            for (const auto& [u, v] : f.arcs[static_cast<std::size_t>(i)]) {
                if (g.is_ground(v) && v != t) fail("request " + std::to_string(i) + ": ground transit");
            }
        }
    }
    for (int e = 0; e < g.edge_count(); ++e) {
        if (ch_use[static_cast<std::size_t>(e)] > g.channels(e)) fail("channel-capacity: edge " + std::to_string(e));
    }
    for (std::size_t v = 0; v < n; ++v) {
        const auto& r = g.resources(static_cast<int>(v));
        if (tx[v] > r.transmitters) fail("transmitters: vertex " + std::to_string(v));
        if (rx[v] > r.receivers) fail("receivers: vertex " + std::to_string(v));
        if (mem[v] > r.memories) fail("memories: vertex " + std::to_string(v));
    }
    return rep;
}

/// Traces each served commodity from its source along unit out-arcs to its
/// destination. Arcs not on that walk (detached cycles) are dropped and loops
/// touching the walk are cut out. Throws std::logic_error when the flow
/// violates conservation.
inline std::map<int, EntanglementPath> extract_paths(const FlowAssignment& f, const LogicalGraph& g,
                                                     const RequestBatch& batch) {
    std::map<int, EntanglementPath> out;
    for (int i = 0; i < batch.size(); ++i) {
        const auto& arcs = f.arcs[static_cast<std::size_t>(i)];
        const Request& r = batch.requests[static_cast<std::size_t>(i)];
        const auto [s, t] = request_vertices(g, r);
        const int x = f.served[static_cast<std::size_t>(i)];
        std::map<int, int> net;
        std::map<int, std::vector<int>> out_arcs;
        for (const auto& [u, v] : arcs) {
            ++net[u];
            --net[v];
            out_arcs[u].push_back(v);  // ascending, arcs is ordered
        }
        for (const auto& [z, value] : net) {
            const int want = z == s ? x : z == t ? -x : 0;
            if (value != want) throw std::logic_error("extract_paths: conservation violated for request " + std::to_string(i));
        }
        if (net.empty() && x != 0) throw std::logic_error("extract_paths: served request without flow");
        if (x == 0) continue;

        std::map<int, std::size_t> used;  // next unused out-arc per vertex
        std::vector<int> walk{s};
        std::map<int, std::size_t> position{{s, 0}};
        int cur = s;
        while (cur != t) {
            auto& list = out_arcs[cur];
            auto& k = used[cur];
            if (k >= list.size()) throw std::logic_error("extract_paths: dead end for request " + std::to_string(i));
            const int nxt = list[k++];
            if (auto it = position.find(nxt); it != position.end()) {
                for (std::size_t j = it->second + 1; j < walk.size(); ++j) position.erase(walk[j]);
                walk.resize(it->second + 1);
            } else {
                position[nxt] = walk.size();
                walk.push_back(nxt);
            }
            cur = nxt;
        }
        out[i] = EntanglementPath{std::move(walk), r.demand};
    }
    return out;
}

}  // namespace qsat
