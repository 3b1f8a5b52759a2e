// Exact OED solver: branch-and-bound over the integer multi-commodity flow
// model with Lagrangian bounds.
//
// Every resource constraint (pooled edge channels, per-vertex transmitters,
// receivers and memories) is dualized with a price. For fixed prices the
// relaxation splits into one cheapest-path problem per request, so the bound
// costs one Dijkstra per open request and is tightened by projected
// subgradient steps. Nodes branch on request admission (x_i) while some
// undecided request sits on an oversubscribed resource. Otherwise an
// oversubscribed vertex or edge is picked and each admitted request routed
// through it gets a child in which that resource is banned for it.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qsat/greedy.hpp"
#include "qsat/routing.hpp"
#include "qsat/solution.hpp"

namespace qsat {

/// Roughly 40 s of search on a desktop core.
inline constexpr std::uint64_t kDefaultEffortLimit = 3'000'000'000;

struct ExactOptions {
    RoutingRules rules;
    std::optional<double> time_limit_s;
    /// Deterministic alternative to the time limit: maximum number of arcs
    /// scanned by the path searches.
    std::optional<std::uint64_t> effort_limit;
    /// Feasible solutions used as starting incumbents (verified first).
    std::vector<Solution> warm_starts;
};

struct ExactStats {
    std::uint64_t nodes = 0;
    std::uint64_t shortest_path_calls = 0;
    std::uint64_t arc_scans = 0;
    bool limit_hit = false;
    double root_bound = 0.0;
    long initial_incumbent = 0;
};

namespace detail {

class BranchAndBound {
public:
    BranchAndBound(const LogicalGraph& g, const RequestBatch& batch, const ExactOptions& opt)
        : pristine_(g), residual_(g), batch_(batch), opt_(opt), start_(std::chrono::steady_clock::now()) {
        for (const auto& r : batch.requests) {
            r.validate();
            const auto [s, t] = request_vertices(g, r);
            reqs_.push_back({s, t, r.demand, r.reward});
        }
        ban_vertex_.resize(reqs_.size());
        ban_edge_.resize(reqs_.size());
    }

    Solution run() {
        offer_incumbent(greedy_solve(pristine_, batch_, opt_.rules));
        for (const auto& w : opt_.warm_starts) offer_incumbent(w);

        initial_incumbent_ = best_reward_;
        std::vector<int> undecided = ratio_order(batch_);
        Prices prices(pristine_.vertex_count(), pristine_.edge_count());
        search({}, std::move(undecided), prices, kRootIterations);

        Solution sol;
        sol.solver = opt_.rules.allow_isl ? SolverKind::Exact : SolverKind::RestrictedExact;
        Solution tmp;
        tmp.paths = best_paths_;
        sol.paths = extract_paths(to_flow_assignment(tmp, batch_), pristine_, batch_);
        for (const auto& [i, p] : sol.paths) {
            sol.served.insert(i);
            sol.total_reward += batch_.requests[static_cast<std::size_t>(i)].reward;
        }
        sol.proven_optimal = !aborted_;
        sol.runtime_s = elapsed();
        return sol;
    }

    ExactStats stats() const { return {nodes_, search_.shortest_path_calls, search_.arc_scans, aborted_, root_bound_, initial_incumbent_}; }

private:
    struct Commodity {
        int s, t, d, w;
    };

    struct Relaxation {
        double bound = 0.0;
        std::vector<std::optional<std::vector<int>>> paths;  // per request
        std::vector<double> unit_cost;
        std::vector<char> selected;
    };

    static constexpr int kRootIterations = 300;
    static constexpr int kNodeIterations = 40;
    static constexpr int kStall = 8;
    static constexpr double kTol = 1e-6;
    static constexpr double kLoadWeight = 100.0;

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    bool out_of_budget() {
        if (aborted_) return true;
        if (opt_.effort_limit && search_.arc_scans > *opt_.effort_limit) aborted_ = true;
        if (opt_.time_limit_s && elapsed() > *opt_.time_limit_s) aborted_ = true;
        return aborted_;
    }

    double threshold() const { return static_cast<double>(best_reward_) + 1.0 - kTol; }

    void offer_incumbent(const Solution& s) {
        if (s.total_reward <= best_reward_) return;
        if (!verify_solution(pristine_, batch_, s, opt_.rules)) return;
        best_reward_ = s.total_reward;
        best_paths_ = s.paths;
        improve();
    }

    void offer_incumbent(long reward, const std::vector<std::pair<int, EntanglementPath>>& routed) {
        if (reward <= best_reward_) return;
        best_reward_ = reward;
        best_paths_.clear();
        for (const auto& [i, p] : routed) best_paths_.emplace(i, p);
        improve();
    }

    /// Ejection moves on the incumbent: drop one served request, route an
    /// unserved one on a minimum-hop path, then refill with the dropped request
    /// and the other unserved ones. Repeats while the reward grows.
    void improve() {
        if (improving_) return;
        improving_ = true;
        bool better = true;
        while (better && !out_of_budget()) {
            better = false;
            LogicalGraph base = pristine_;
            for (const auto& [i, p] : best_paths_) reserve_path(base, p);
            std::vector<int> unserved;
            long open = 0;
            for (int j : ratio_order(batch_)) {
                if (best_paths_.contains(j)) continue;
                unserved.push_back(j);
                open += reqs_[static_cast<std::size_t>(j)].w;
            }
            auto route = [&](LogicalGraph& g, int j) -> std::optional<EntanglementPath> {
                const auto& c = reqs_[static_cast<std::size_t>(j)];
                auto p = bfs_path(g, c.s, c.t, c.d, opt_.rules);
                if (p) reserve_path(g, *p);
                return p;
            };
            for (std::size_t a = 0; a < unserved.size() && !better; ++a) {
                const int u = unserved[a];
                for (const auto& [v, pv] : best_paths_) {
                    if (reqs_[static_cast<std::size_t>(v)].w >= open) continue;
                    LogicalGraph work = base;
                    release_path(work, pv);
                    auto pu = route(work, u);
                    if (!pu) continue;
                    std::map<int, EntanglementPath> paths = best_paths_;
                    paths.erase(v);
                    paths.emplace(u, std::move(*pu));
                    long reward = best_reward_ - reqs_[static_cast<std::size_t>(v)].w + reqs_[static_cast<std::size_t>(u)].w;
                    if (auto p = route(work, v)) {
                        paths.emplace(v, std::move(*p));
                        reward += reqs_[static_cast<std::size_t>(v)].w;
                    }
                    for (int x : unserved) {
                        if (x == u) continue;
                        if (auto p = route(work, x)) {
                            paths.emplace(x, std::move(*p));
                            reward += reqs_[static_cast<std::size_t>(x)].w;
                        }
                    }
                    if (reward > best_reward_) {
                        best_reward_ = reward;
                        best_paths_ = std::move(paths);
                        better = true;
                        break;
                    }
                }
            }
        }
        improving_ = false;
    }

    RouteFilter filter_for(int j) const {
        const auto& c = reqs_[static_cast<std::size_t>(j)];
        return RouteFilter(residual_, c.s, c.t, c.d, opt_.rules);
    }

    /// Lagrangian value at `prices`; nullopt when a forced request has no path.
    /// Undecided requests without any feasible path are dropped from `undecided`.
    /// Lagrangian value at `prices`; nullopt when a forced request has no path.
    /// Undecided requests without any feasible path are dropped from `undecided`.
    /// Among equally priced paths, each request prefers vertices and edges
    /// lightly loaded by the requests priced before it.
    std::optional<Relaxation> relax(const std::vector<int>& forced, std::vector<int>& undecided, const Prices& prices) {
        const auto n = reqs_.size();
        Relaxation rx;
        rx.paths.assign(n, std::nullopt);
        rx.unit_cost.assign(n, 0.0);
        rx.selected.assign(n, 0);
        double value = 0.0;
        for (int v = 0; v < residual_.vertex_count(); ++v) {
            const auto i = static_cast<std::size_t>(v);
            const auto& r = residual_.resources(v);
            value += prices.tx[i] * r.transmitters + prices.rx[i] * r.receivers + prices.mem[i] * r.memories;
        }
        for (int e = 0; e < residual_.edge_count(); ++e) value += prices.ch[static_cast<std::size_t>(e)] * residual_.channels(e);

        load_vertex_.assign(static_cast<std::size_t>(residual_.vertex_count()), 1.0);
        load_edge_.assign(static_cast<std::size_t>(residual_.edge_count()), 1.0);
        auto add_load = [&](const std::vector<int>& p, int d) {
            for (std::size_t k = 0; k < p.size(); ++k) {
                const auto& r = residual_.resources(p[k]);
                load_vertex_[static_cast<std::size_t>(p[k])] += kLoadWeight * 2.0 * d / std::max(1, r.memories);
                if (k + 1 < p.size()) {
                    const int e = *residual_.find_edge(p[k], p[k + 1]);
                    load_edge_[static_cast<std::size_t>(e)] += kLoadWeight * d / std::max(1, residual_.channels(e));
                }
            }
        };
        auto price = [&](int j) -> bool {
            const auto k = static_cast<std::size_t>(j);
            const auto f = filter_for(j);
            if (!f.endpoints_ok()) return false;
            const auto& bv = ban_vertex_[k];
            auto p = cheapest_path(residual_, f, prices, f.source(), bv.empty() ? nullptr : &bv, ban_edge_[k], &search_,
                                   TieCosts{load_vertex_, load_edge_});
            if (!p) return false;
            rx.unit_cost[k] = prices.path_cost(residual_, *p);
            rx.paths[k] = std::move(*p);
            return true;
        };
        for (int j : forced) {
            if (!price(j)) return std::nullopt;
            const auto& c = reqs_[static_cast<std::size_t>(j)];
            value += c.w - c.d * rx.unit_cost[static_cast<std::size_t>(j)];
            rx.selected[static_cast<std::size_t>(j)] = 1;
            add_load(*rx.paths[static_cast<std::size_t>(j)], c.d);
        }
        std::vector<int> keep;
        keep.reserve(undecided.size());
        for (int j : undecided) {
            if (!price(j)) continue;
            keep.push_back(j);
            const auto& c = reqs_[static_cast<std::size_t>(j)];
            const double profit = c.w - c.d * rx.unit_cost[static_cast<std::size_t>(j)];
            if (profit > 0.0) {
                value += profit;
                rx.selected[static_cast<std::size_t>(j)] = 1;
                add_load(*rx.paths[static_cast<std::size_t>(j)], c.d);
            }
        }
        undecided = std::move(keep);
        rx.bound = value;
        return rx;
    }

    struct Usage {
        std::vector<long> tx, rx, mem, ch;
    };

    Usage usage_of(const Relaxation& rel) const {
        const auto nv = static_cast<std::size_t>(residual_.vertex_count());
        Usage u{std::vector<long>(nv, 0), std::vector<long>(nv, 0), std::vector<long>(nv, 0),
                std::vector<long>(static_cast<std::size_t>(residual_.edge_count()), 0)};
        for (std::size_t j = 0; j < reqs_.size(); ++j) {
            if (!rel.selected[j]) continue;
            const auto& p = *rel.paths[j];
            const int d = reqs_[j].d;
            for (std::size_t k = 0; k < p.size(); ++k) {
                const auto c = role_cost(k, p.size(), d);
                const auto v = static_cast<std::size_t>(p[k]);
                u.tx[v] += c.transmitters;
                u.rx[v] += c.receivers;
                u.mem[v] += c.memories;
                if (k + 1 < p.size()) u.ch[static_cast<std::size_t>(*residual_.find_edge(p[k], p[k + 1]))] += d;
            }
        }
        return u;
    }

    /// Requests whose relaxed path touches an oversubscribed resource.
    std::vector<int> conflicting(const Relaxation& rel, const Usage& u) const {
        std::vector<int> out;
        for (std::size_t j = 0; j < reqs_.size(); ++j) {
            if (!rel.selected[j]) continue;
            const auto& p = *rel.paths[j];
            bool hit = false;
            for (std::size_t k = 0; k < p.size() && !hit; ++k) {
                const auto v = static_cast<std::size_t>(p[k]);
                const auto& r = residual_.resources(p[k]);
                hit = u.tx[v] > r.transmitters || u.rx[v] > r.receivers || u.mem[v] > r.memories;
                if (!hit && k + 1 < p.size()) {
                    const int e = *residual_.find_edge(p[k], p[k + 1]);
                    hit = u.ch[static_cast<std::size_t>(e)] > residual_.channels(e);
                }
            }
            if (hit) out.push_back(static_cast<int>(j));
        }
        return out;
    }

    /// Builds a feasible completion from the relaxed paths: forced requests
    /// first, then undecided ones by reduced profit, rerouting on conflict.
    void repair(const std::vector<int>& forced, const std::vector<int>& undecided, const Relaxation& rel,
                const Prices& prices) {
        LogicalGraph work = residual_;
        std::vector<std::pair<int, EntanglementPath>> routed;
        long reward = 0;
        auto attempt = [&](int j) -> bool {
            const auto& c = reqs_[static_cast<std::size_t>(j)];
            if (rel.paths[static_cast<std::size_t>(j)]) {
                EntanglementPath p{*rel.paths[static_cast<std::size_t>(j)], c.d};
                if (reserve_path(work, p)) {
                    routed.emplace_back(j, std::move(p));
                    return true;
                }
            }
            RouteFilter f(work, c.s, c.t, c.d, opt_.rules);
            if (!f.endpoints_ok()) return false;
            auto p = cheapest_path(work, f, prices, c.s, nullptr, {}, &search_);
            if (!p) return false;
            EntanglementPath ep{std::move(*p), c.d};
            reserve_path(work, ep);
            routed.emplace_back(j, std::move(ep));
            return true;
        };
        std::vector<int> order(forced);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return reqs_[static_cast<std::size_t>(a)].d > reqs_[static_cast<std::size_t>(b)].d; });
        for (int j : order) {
            if (!attempt(j)) return;
            reward += reqs_[static_cast<std::size_t>(j)].w;
        }
        std::vector<int> rest(undecided);
        auto profit = [&](int j) {
            const auto& c = reqs_[static_cast<std::size_t>(j)];
            return rel.paths[static_cast<std::size_t>(j)] ? c.w - c.d * rel.unit_cost[static_cast<std::size_t>(j)]
                                                          : -std::numeric_limits<double>::infinity();
        };
        std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) { return profit(a) > profit(b); });
        for (int j : rest) {
            if (attempt(j)) reward += reqs_[static_cast<std::size_t>(j)].w;
        }
        offer_incumbent(reward, routed);
    }

    struct NodeBound {
        bool prune = false;
        double best = 0.0;
        Prices prices;
        Relaxation relaxation;
    };

    /// Projected subgradient descent on the Lagrangian dual.
    NodeBound bound_node(const std::vector<int>& forced, std::vector<int>& undecided, Prices prices, int iterations) {
        NodeBound nb;
        double step_scale = 1.0;
        int stall = 0;
        double best = std::numeric_limits<double>::infinity();
        const auto nv = static_cast<std::size_t>(residual_.vertex_count());
        const auto ne = static_cast<std::size_t>(residual_.edge_count());
        for (int it = 0; it < iterations; ++it) {
            if (out_of_budget()) {
                nb.prune = true;
                return nb;
            }
            auto rel = relax(forced, undecided, prices);
            if (!rel) {
                nb.prune = true;
                return nb;
            }
            const auto usage = usage_of(*rel);
            bool feasible = true;
            for (std::size_t v = 0; v < nv && feasible; ++v) {
                const auto& r = residual_.resources(static_cast<int>(v));
                feasible = usage.tx[v] <= r.transmitters && usage.rx[v] <= r.receivers && usage.mem[v] <= r.memories;
            }
            for (std::size_t e = 0; e < ne && feasible; ++e) feasible = usage.ch[e] <= residual_.channels(static_cast<int>(e));
            if (feasible) {
                long reward = 0;
                std::vector<std::pair<int, EntanglementPath>> routed;
                for (std::size_t j = 0; j < reqs_.size(); ++j) {
                    if (!rel->selected[j]) continue;
                    reward += reqs_[j].w;
                    routed.emplace_back(static_cast<int>(j), EntanglementPath{*rel->paths[j], reqs_[j].d});
                }
                offer_incumbent(reward, routed);
            } else {
                repair(forced, undecided, *rel, prices);
            }
            if (rel->bound < best - kTol) {
                best = rel->bound;
                nb.best = best;
                stall = 0;
                nb.prices = prices;
                nb.relaxation = *rel;
            } else if (++stall >= kStall) {
                step_scale *= 0.5;
                stall = 0;
            }
            if (best < threshold()) {
                nb.prune = true;
                return nb;
            }
            if (step_scale < 1e-3) break;

            // g_r = capacity - usage, projected onto the feasible price directions.
            double norm2 = 0.0;
            auto component = [&](double price, long cap, long used) {
                const double gr = static_cast<double>(cap - used);
                return (price <= 0.0 && gr > 0.0) ? 0.0 : gr;
            };
            for (std::size_t v = 0; v < nv; ++v) {
                const auto& r = residual_.resources(static_cast<int>(v));
                const double a = component(prices.tx[v], r.transmitters, usage.tx[v]);
                const double b = component(prices.rx[v], r.receivers, usage.rx[v]);
                const double c = component(prices.mem[v], r.memories, usage.mem[v]);
                norm2 += a * a + b * b + c * c;
            }
            for (std::size_t e = 0; e < ne; ++e) {
                const double a = component(prices.ch[e], residual_.channels(static_cast<int>(e)), usage.ch[e]);
                norm2 += a * a;
            }
            if (norm2 == 0.0) break;
            const double step = step_scale * (rel->bound - threshold() + 0.5) / norm2;
            auto update = [&](double& price, long cap, long used) {
                price = std::max(0.0, price - step * static_cast<double>(cap - used));
            };
            for (std::size_t v = 0; v < nv; ++v) {
                const auto& r = residual_.resources(static_cast<int>(v));
                update(prices.tx[v], r.transmitters, usage.tx[v]);
                update(prices.rx[v], r.receivers, usage.rx[v]);
                update(prices.mem[v], r.memories, usage.mem[v]);
            }
            for (std::size_t e = 0; e < ne; ++e) update(prices.ch[e], residual_.channels(static_cast<int>(e)), usage.ch[e]);
        }
        nb.prune = best < threshold();
        return nb;
    }

    long optimistic(const std::vector<int>& forced, const std::vector<int>& undecided) const {
        long v = 0;
        for (int j : forced) v += reqs_[static_cast<std::size_t>(j)].w;
        for (int j : undecided) v += reqs_[static_cast<std::size_t>(j)].w;
        return v;
    }

    void search(std::vector<int> forced, std::vector<int> undecided, const Prices& parent_prices, int iterations) {
        if (out_of_budget()) return;
        if (optimistic(forced, undecided) <= best_reward_) return;
        ++nodes_;
        auto nb = bound_node(forced, undecided, parent_prices, iterations);
        if (nodes_ == 1) root_bound_ = nb.best;
        if (nb.prune || aborted_) return;
        if (optimistic(forced, undecided) <= best_reward_) return;

        const auto& rel = nb.relaxation;
        const auto conflicts = conflicting(rel, usage_of(rel));
        auto by_reward = [&](int a, int b) {
            const auto& ra = reqs_[static_cast<std::size_t>(a)];
            const auto& rb = reqs_[static_cast<std::size_t>(b)];
            return ra.w != rb.w ? ra.w > rb.w : a < b;
        };
        std::optional<int> admit;
        for (int j : conflicts) {
            if (std::find(undecided.begin(), undecided.end(), j) != undecided.end() && (!admit || by_reward(j, *admit))) {
                admit = j;
            }
        }
        if (!admit && conflicts.empty() && !undecided.empty()) admit = undecided.front();

        if (admit) {
            std::vector<int> rest;
            for (int j : undecided) {
                if (j != *admit) rest.push_back(j);
            }
            auto with = forced;
            with.push_back(*admit);
            search(std::move(with), rest, nb.prices, kNodeIterations);
            search(std::move(forced), std::move(rest), nb.prices, kNodeIterations);
            return;
        }
        if (conflicts.empty()) return;  // relaxed routing of the forced set is feasible and already offered

        // Every oversubscribed resource has at least one user that must avoid
        // it: one child per user, banning the resource for that request.
        const auto u = usage_of(rel);
        struct Choice {
            int vertex = -1, edge = -1;
            std::vector<int> users;
            long over = 0;
        };
        std::optional<Choice> pick;
        auto consider = [&](Choice c) {
            if (c.users.empty()) return;
            if (!pick || c.users.size() < pick->users.size() ||
                (c.users.size() == pick->users.size() && c.over > pick->over)) {
                pick = std::move(c);
            }
        };
        bool endpoint_overload = false;
        for (int v = 0; v < residual_.vertex_count(); ++v) {
            const auto i = static_cast<std::size_t>(v);
            const auto& r = residual_.resources(v);
            const long over = std::max({u.tx[i] - r.transmitters, u.rx[i] - r.receivers, u.mem[i] - r.memories});
            if (over <= 0) continue;
            Choice c{v, -1, {}, over};
            for (std::size_t j = 0; j < reqs_.size(); ++j) {
                if (!rel.selected[j]) continue;
                const auto& p = *rel.paths[j];
                if (std::find(p.begin() + 1, p.end() - 1, v) != p.end() - 1) c.users.push_back(static_cast<int>(j));
            }
            if (c.users.empty()) endpoint_overload = true;
            consider(std::move(c));
        }
        for (int e = 0; e < residual_.edge_count(); ++e) {
            const long over = u.ch[static_cast<std::size_t>(e)] - residual_.channels(e);
            if (over <= 0) continue;
            Choice c{-1, e, {}, over};
            const auto& ed = residual_.edge(e);
            for (std::size_t j = 0; j < reqs_.size(); ++j) {
                if (!rel.selected[j]) continue;
                const auto& p = *rel.paths[j];
                for (std::size_t k = 0; k + 1 < p.size(); ++k) {
                    if (std::min(p[k], p[k + 1]) == ed.u && std::max(p[k], p[k + 1]) == ed.v) {
                        c.users.push_back(static_cast<int>(j));
                        break;
                    }
                }
            }
            consider(std::move(c));
        }
        if (endpoint_overload || !pick) return;  // admitted requests alone exceed an endpoint budget
        for (int j : pick->users) {
            auto& bv = ban_vertex_[static_cast<std::size_t>(j)];
            auto& be = ban_edge_[static_cast<std::size_t>(j)];
            if (pick->vertex >= 0) {
                if (bv.empty()) bv.assign(static_cast<std::size_t>(residual_.vertex_count()), 0);
                bv[static_cast<std::size_t>(pick->vertex)] = 1;
            } else {
                be.push_back(pick->edge);
            }
            search(forced, undecided, nb.prices, kNodeIterations);
            if (pick->vertex >= 0) bv[static_cast<std::size_t>(pick->vertex)] = 0;
            else be.pop_back();
            if (aborted_) return;
        }
    }

    const LogicalGraph& pristine_;
    LogicalGraph residual_;
    const RequestBatch& batch_;
    const ExactOptions& opt_;
    std::chrono::steady_clock::time_point start_;
    std::vector<Commodity> reqs_;
    long best_reward_ = -1;
    std::map<int, EntanglementPath> best_paths_;
    bool improving_ = false;
    SearchStats search_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<double> load_vertex_, load_edge_;
    // Per-request resources excluded by branching.
    std::vector<std::vector<char>> ban_vertex_;
    std::vector<std::vector<int>> ban_edge_;
    double root_bound_ = 0.0;
    long initial_incumbent_ = 0;
};

}  // namespace detail

/// Maximum-reward feasible admission. proven_optimal is false only when a
/// time or effort limit stopped the search; the best incumbent is returned.
inline Solution exact_solve(const LogicalGraph& g, const RequestBatch& batch, const ExactOptions& opt,
                            ExactStats* stats = nullptr) {
    detail::BranchAndBound bb(g, batch, opt);
    auto sol = bb.run();
    if (stats) *stats = bb.stats();
    return sol;
}

inline Solution exact_solve(const LogicalGraph& g, const RequestBatch& batch, bool allow_isl = true,
                            bool allow_ground_transit = false, std::optional<double> time_limit_s = std::nullopt) {
    ExactOptions opt;
    opt.rules = {allow_isl, allow_ground_transit};
    opt.time_limit_s = time_limit_s;
    return exact_solve(g, batch, opt);
}

}  // namespace qsat
