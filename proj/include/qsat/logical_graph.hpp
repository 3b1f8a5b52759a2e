// Static logical graph for a time window, with residual resources.
//
// Vertex ids equal canonical node ids, so the node<->vertex mapping is the
// identity on ids and trivially bijective.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qsat/geometry.hpp"
#include "qsat/rng.hpp"
#include "qsat/visibility.hpp"

namespace qsat {

struct ResourceProfile {
    int transmitters = 0;
    int receivers = 0;
    int memories = 0;  ///< quantum memories
    bool operator==(const ResourceProfile&) const = default;
};

struct Edge {
    int u = 0;  ///< u < v
    int v = 0;
};

struct Adjacent {
    int to = 0;
    int edge = 0;
};

/// Immutable structure of a logical graph.
struct Topology {
    std::vector<NodeId> nodes;  // indexed by vertex id
    int ground_count = 0;
    int sats_per_ring = 1;
    std::vector<Edge> edges;
    std::vector<std::vector<Adjacent>> adjacency;  // sorted by neighbor id
    TimeWindow window;
};

/// Mutable part: residual resources per vertex and channels per edge.
struct ResidualState {
    std::vector<ResourceProfile> resources;
    std::vector<int> channels;
    bool operator==(const ResidualState&) const = default;
};

/// Ordered vertex sequence from source to destination carrying `demand` ebits.
struct EntanglementPath {
    std::vector<int> vertices;
    int demand = 1;
    bool operator==(const EntanglementPath&) const = default;
};

class LogicalGraph {
public:
    /// Vertices for `ground_count` stations and a rings x sats_per_ring
    /// constellation, each with the same resource budget; no edges yet.
    LogicalGraph(int ground_count, int rings, int sats_per_ring, ResourceProfile budget, TimeWindow window = {}) {
        if (ground_count < 0 || rings < 0 || sats_per_ring < 1) throw std::invalid_argument("bad graph dimensions");
        auto t = std::make_shared<Topology>();
        t->ground_count = ground_count;
        t->sats_per_ring = sats_per_ring;
        t->window = window;
        const int n = ground_count + rings * sats_per_ring;
        t->nodes.reserve(static_cast<std::size_t>(n));
        for (int id = 0; id < n; ++id) t->nodes.push_back(NodeId::from_canonical(id, ground_count, sats_per_ring));
        t->adjacency.resize(static_cast<std::size_t>(n));
        topo_ = std::move(t);
        state_.resources.assign(static_cast<std::size_t>(n), budget);
    }

    /// Adds an undirected edge. Rejects self-loops, ground-ground pairs,
    /// duplicates and non-positive channel counts.
    int add_edge(int a, int b, int channels) {
        check_vertex(a);
        check_vertex(b);
        if (a == b) throw std::invalid_argument("self-loop");
        if (is_ground(a) && is_ground(b)) throw std::invalid_argument("ground-ground edge");
        if (channels < 1) throw std::invalid_argument("edge needs at least one channel");
        if (find_edge(a, b)) throw std::invalid_argument("duplicate edge");
        auto& t = mutable_topology();
        const int e = static_cast<int>(t.edges.size());
        t.edges.push_back({std::min(a, b), std::max(a, b)});
        auto insert_sorted = [](std::vector<Adjacent>& list, Adjacent adj) {
            auto it = std::lower_bound(list.begin(), list.end(), adj.to,
                                       [](const Adjacent& x, int to) { return x.to < to; });
            list.insert(it, adj);
        };
        insert_sorted(t.adjacency[static_cast<std::size_t>(a)], {b, e});
        insert_sorted(t.adjacency[static_cast<std::size_t>(b)], {a, e});
        state_.channels.push_back(channels);
        return e;
    }

    int vertex_count() const { return static_cast<int>(topo_->nodes.size()); }
    int edge_count() const { return static_cast<int>(topo_->edges.size()); }
    int ground_count() const { return topo_->ground_count; }
    const TimeWindow& window() const { return topo_->window; }

    /// p(v)
    const NodeId& node(int v) const {
        check_vertex(v);
        return topo_->nodes[static_cast<std::size_t>(v)];
    }
    /// l(z)
    int vertex(const NodeId& z) const {
        const int v = z.canonical(topo_->ground_count, topo_->sats_per_ring);
        check_vertex(v);
        if (!(topo_->nodes[static_cast<std::size_t>(v)] == z)) throw std::out_of_range("node not in graph");
        return v;
    }
    bool is_ground(int v) const { return v < topo_->ground_count; }
    bool is_satellite(int v) const { return v >= topo_->ground_count; }

    const Edge& edge(int e) const { return topo_->edges[static_cast<std::size_t>(e)]; }
    std::span<const Edge> edges() const { return topo_->edges; }
    std::span<const Adjacent> neighbors(int v) const { return topo_->adjacency[static_cast<std::size_t>(v)]; }

    std::optional<int> find_edge(int a, int b) const {
        if (a < 0 || b < 0 || a >= vertex_count() || b >= vertex_count()) return std::nullopt;
        const auto& list = topo_->adjacency[static_cast<std::size_t>(a)];
        auto it = std::lower_bound(list.begin(), list.end(), b, [](const Adjacent& x, int to) { return x.to < to; });
        if (it == list.end() || it->to != b) return std::nullopt;
        return it->edge;
    }

    int channels(int e) const { return state_.channels[static_cast<std::size_t>(e)]; }
    const ResourceProfile& resources(int v) const { return state_.resources[static_cast<std::size_t>(v)]; }
    void set_resources(int v, ResourceProfile r) {
        check_vertex(v);
        state_.resources[static_cast<std::size_t>(v)] = r;
    }
    void set_channels(int e, int c) { state_.channels.at(static_cast<std::size_t>(e)) = c; }

    const ResidualState& state() const { return state_; }
    ResidualState& mutable_state() { return state_; }
    const Topology& topology() const { return *topo_; }

    bool is_isl(int e) const { return is_satellite(edge(e).u) && is_satellite(edge(e).v); }

    int sat_sat_edge_count() const {
        int n = 0;
        for (int e = 0; e < edge_count(); ++e) n += is_isl(e) ? 1 : 0;
        return n;
    }
    /// Ground stations with at least one edge.
    int ground_connected_count() const {
        int n = 0;
        for (int g = 0; g < ground_count(); ++g) n += neighbors(g).empty() ? 0 : 1;
        return n;
    }

    /// Same topology, same residual state.
    bool operator==(const LogicalGraph& o) const {
        if (state_ != o.state_ || vertex_count() != o.vertex_count() || edge_count() != o.edge_count()) return false;
        for (int e = 0; e < edge_count(); ++e) {
            if (edge(e).u != o.edge(e).u || edge(e).v != o.edge(e).v) return false;
        }
        return true;
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::out_of_range("vertex id out of range");
    }
    Topology& mutable_topology() {
        if (topo_.use_count() > 1) topo_ = std::make_shared<Topology>(*topo_);
        return const_cast<Topology&>(*topo_);
    }

    std::shared_ptr<const Topology> topo_;
    ResidualState state_;
};

/// Channel count of an edge: 1 + (pair_hash(seed, a, b) mod 5).
inline int edge_channels(std::uint64_t channel_seed, int a, int b) {
    return 1 + static_cast<int>(pair_hash(channel_seed, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)) % 5);
}

/// Connects every node pair that stays in range over the whole window.
inline LogicalGraph build_logical_graph(const PhysicalNetwork& net, const TimeWindow& w, std::uint64_t channel_seed,
                                        int resource_default = 10) {
    net.cfg.validate();
    w.validate();
    if (net.stations.empty()) throw std::invalid_argument("at least one ground station is required");
    if (resource_default < 0) throw std::invalid_argument("resource_default must be >= 0");

    LogicalGraph g(net.ground_count(), net.cfg.rings, net.cfg.sats_per_ring,
                   {resource_default, resource_default, resource_default}, w);
    const int n = net.node_count();
    const auto times = window_samples(w, net.cfg.sample_step_h);
    // positions[t * n + v]
    std::vector<Vec3> positions(times.size() * static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < times.size(); ++t) {
        for (int v = 0; v < n; ++v) positions[t * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)] =
            net.position(g.node(v), times[t]);
    }
    const double gs_range = range_ground_sat(net.cfg);
    const double ss_range = range_sat_sat(net.cfg);
    const int ground = net.ground_count();
    for (int a = 0; a < n; ++a) {
        for (int b = std::max(a + 1, ground); b < n; ++b) {
            const double range = a < ground ? gs_range : ss_range;
            bool ok = true;
            for (std::size_t t = 0; t < times.size() && ok; ++t) {
                const auto base = t * static_cast<std::size_t>(n);
                ok = distance(positions[base + static_cast<std::size_t>(a)], positions[base + static_cast<std::size_t>(b)]) <= range;
            }
            if (ok) g.add_edge(a, b, edge_channels(channel_seed, a, b));
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Path reservation
//
// Orienting the path source -> destination, each hop u -> v consumes d channels
// on (u, v), d transmitters and d memories at u, d receivers and d memories at v.

namespace detail {

/// Edge ids along the path, or nullopt if the path is malformed (too short,
/// repeated vertex, missing edge, non-positive demand).
inline std::optional<std::vector<int>> path_edges(const LogicalGraph& g, const EntanglementPath& p) {
    if (p.demand < 1 || p.vertices.size() < 2) return std::nullopt;
    std::vector<int> seen(p.vertices);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return std::nullopt;
    std::vector<int> edges;
    edges.reserve(p.vertices.size() - 1);
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        auto e = g.find_edge(p.vertices[i], p.vertices[i + 1]);
        if (!e) return std::nullopt;
        edges.push_back(*e);
    }
    return edges;
}

/// Role-based cost of vertex position i in a path of `len` vertices.
inline ResourceProfile role_cost(std::size_t i, std::size_t len, int d) {
    const bool first = i == 0;
    const bool last = i + 1 == len;
    return {last ? 0 : d, first ? 0 : d, (first || last) ? d : 2 * d};
}

inline void apply(ResidualState& s, const EntanglementPath& p, const std::vector<int>& edges, int sign) {
    const int d = p.demand * sign;
    for (int e : edges) s.channels[static_cast<std::size_t>(e)] -= d;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const auto c = role_cost(i, p.vertices.size(), d);
        auto& r = s.resources[static_cast<std::size_t>(p.vertices[i])];
        r.transmitters -= c.transmitters;
        r.receivers -= c.receivers;
        r.memories -= c.memories;
    }
}

}  // namespace detail

inline bool check_path_feasible(const LogicalGraph& g, const EntanglementPath& p) {
    for (int v : p.vertices) {
        if (v < 0 || v >= g.vertex_count()) return false;
    }
    auto edges = detail::path_edges(g, p);
    if (!edges) return false;
    for (int e : *edges) {
        if (g.channels(e) < p.demand) return false;
    }
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const auto need = detail::role_cost(i, p.vertices.size(), p.demand);
        const auto& have = g.resources(p.vertices[i]);
        if (have.transmitters < need.transmitters || have.receivers < need.receivers ||
            have.memories < need.memories) {
            return false;
        }
    }
    return true;
}

/// Reserves the path's resources. Returns false and leaves the graph
/// unchanged when the path is infeasible.
inline bool reserve_path(LogicalGraph& g, const EntanglementPath& p) {
    if (!check_path_feasible(g, p)) return false;
    detail::apply(g.mutable_state(), p, *detail::path_edges(g, p), +1);
    return true;
}

/// Exact inverse of a successful reserve_path.
inline void release_path(LogicalGraph& g, const EntanglementPath& p) {
    auto edges = detail::path_edges(g, p);
    if (!edges) throw std::invalid_argument("release_path: malformed path");
    detail::apply(g.mutable_state(), p, *edges, -1);
}

}  // namespace qsat
