// Evaluation scenarios: a single long-haul request, a 20-request batch, and
// the 1728-case sweep over batch size, constellation size, window length and
// start time.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qsat/exact.hpp"
#include "qsat/greedy.hpp"
#include "qsat/logical_graph.hpp"
#include "qsat/requests.hpp"
#include "qsat/stations.hpp"

namespace qsat {

struct HarnessOptions {
    ConstellationConfig base;  // rings / sats_per_ring are overridden per case
    StationSet stations;
    std::uint64_t channel_seed = 1;
    int resource_default = 10;
    ExactOptions exact = [] {  // allow_isl is set per solver
        ExactOptions o;
        o.effort_limit = kDefaultEffortLimit;
        return o;
    }();
    unsigned threads = 1;
    std::ostream* log = nullptr;
};

struct SolverOutcome {
    long reward = 0;
    double runtime_s = 0.0;
    int served = 0;
    bool proven_optimal = true;
};

struct ScenarioResult {
    std::string scenario;
    int n = 0;
    int rings = 0;
    int sats_per_ring = 0;
    double delta = 0.0;
    double tau = 0.0;
    std::uint64_t seed = 0;
    SolverOutcome greedy, exact, restricted;
    double ratio_greedy = 1.0;
    double ratio_restricted = 1.0;

    /// The exact or restricted search stopped on a limit.
    bool limited() const { return !exact.proven_optimal || !restricted.proven_optimal; }
};

inline SolverOutcome outcome_of(const Solution& s) {
    return {s.total_reward, s.runtime_s, static_cast<int>(s.served.size()), s.proven_optimal};
}

inline PhysicalNetwork make_network(const HarnessOptions& opt, int rings, int sats_per_ring) {
    PhysicalNetwork net{opt.base, opt.stations.coords};
    net.cfg.rings = rings;
    net.cfg.sats_per_ring = sats_per_ring;
    return net;
}

/// Runs greedy, restricted exact and exact on one batch and verifies all three.
inline ScenarioResult run_case(const HarnessOptions& opt, const LogicalGraph& g, const RequestBatch& batch) {
    const RoutingRules full{true, opt.exact.rules.allow_ground_transit};
    const RoutingRules no_isl{false, opt.exact.rules.allow_ground_transit};

    const Solution greedy = greedy_solve(g, batch, full);
    ExactOptions ro = opt.exact;
    ro.rules = no_isl;
    ro.warm_starts.clear();
    const Solution restricted = exact_solve(g, batch, ro);
    ExactOptions eo = opt.exact;
    eo.rules = full;
    eo.warm_starts = {restricted};
    const Solution exact = exact_solve(g, batch, eo);

    for (const auto& [sol, rules] : {std::pair{&greedy, full}, std::pair{&restricted, no_isl}, std::pair{&exact, full}}) {
        auto rep = verify_solution(g, batch, *sol, rules);
        if (!rep) {
            throw std::logic_error(std::string("solution failed verification (") + to_string(sol->solver) +
                                   "): " + rep.violations.front());
        }
    }
    ScenarioResult r;
    r.greedy = outcome_of(greedy);
    r.restricted = outcome_of(restricted);
    r.exact = outcome_of(exact);
    if (exact.total_reward > 0) {
        r.ratio_greedy = static_cast<double>(greedy.total_reward) / static_cast<double>(exact.total_reward);
        r.ratio_restricted = static_cast<double>(restricted.total_reward) / static_cast<double>(exact.total_reward);
    }
    return r;
}

namespace detail {

/// Runs fn(0..count-1) on up to `threads` workers.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

struct CaseSpec {
    int n, rings;
    double delta, tau;
    std::uint64_t seed;
    std::vector<Request> requests;
};

inline std::vector<ScenarioResult> run_cases(const HarnessOptions& opt, const std::string& id,
                                             std::vector<CaseSpec> cases) {
    std::vector<ScenarioResult> out(cases.size());
    // Cases sharing (rings, delta, tau) share one logical graph.
    std::map<std::tuple<int, double, double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < cases.size(); ++i) groups[{cases[i].rings, cases[i].delta, cases[i].tau}].push_back(i);
    std::vector<std::vector<std::size_t>> jobs;
    for (auto& [key, idx] : groups) jobs.push_back(idx);
    std::atomic<std::size_t> done{0};
    std::mutex log_mutex;
    parallel_for(jobs.size(), opt.threads, [&](std::size_t job) {
        const auto& first = cases[jobs[job].front()];
        const auto net = make_network(opt, first.rings, first.rings);
        const TimeWindow w{first.tau, first.delta};
        const auto g = build_logical_graph(net, w, opt.channel_seed, opt.resource_default);
        for (std::size_t i : jobs[job]) {
            const auto& c = cases[i];
            RequestBatch batch{c.requests, w};
            auto r = run_case(opt, g, batch);
            r.scenario = id;
            r.n = c.n;
            r.rings = c.rings;
            r.sats_per_ring = c.rings;
            r.delta = c.delta;
            r.tau = c.tau;
            r.seed = c.seed;
            out[i] = r;
            const auto k = ++done;
            if (opt.log) {
                std::lock_guard lock(log_mutex);
                char buf[200];
                std::snprintf(buf, sizeof buf, "[%s %zu/%zu] N=%d R=K=%d delta=%.3f tau=%.1f greedy=%ld exact=%ld rexact=%ld%s\n",
                              id.c_str(), k, cases.size(), c.n, c.rings, c.delta, c.tau, r.greedy.reward,
                              r.exact.reward, r.restricted.reward, r.limited() ? " (limit)" : "");
                *opt.log << buf << std::flush;
            }
        }
    });
    return out;
}

inline std::vector<double> delta_sweep() {
    std::vector<double> d;
    for (int k = 0; k <= 30; ++k) d.push_back(k / 100.0);
    return d;
}

}  // namespace detail

/// Single NYC-Singapore request (demand 1, reward 1, tau 0). Case 1 sweeps
/// delta 0.00..0.30 at R=K in {10, 20}; case 2 sweeps R=K 1..25 at delta in {0, 0.1}.
inline std::vector<ScenarioResult> scenario_one(const HarnessOptions& opt) {
    const int nyc = opt.stations.index_of("NYC");
    const int sin = opt.stations.index_of("Singapore");
    if (nyc < 0 || sin < 0) throw std::invalid_argument("scenario i needs NYC and Singapore in the station set");
    const std::vector<Request> reqs{Request{nyc, sin, 1, 1, 0}};
    std::vector<detail::CaseSpec> cases;
    for (int rk : {10, 20}) {
        for (double d : detail::delta_sweep()) cases.push_back({1, rk, d, 0.0, 0, reqs});
    }
    for (double d : {0.0, 0.1}) {
        for (int rk = 1; rk <= 25; ++rk) cases.push_back({1, rk, d, 0.0, 0, reqs});
    }
    return detail::run_cases(opt, "i", std::move(cases));
}

/// 20 random requests at tau 0. Case 1 sweeps delta 0.00..0.30 at R=K in
/// {10, 20}; case 2 sweeps R=K 1..20 at delta in {0.01, 0.1}.
inline std::vector<ScenarioResult> scenario_two(const HarnessOptions& opt, std::uint64_t seed) {
    const auto reqs = generate_requests(seed, 20, opt.stations.size());
    std::vector<detail::CaseSpec> cases;
    for (int rk : {10, 20}) {
        for (double d : detail::delta_sweep()) cases.push_back({20, rk, d, 0.0, seed, reqs});
    }
    for (double d : {0.01, 0.1}) {
        for (int rk = 1; rk <= 20; ++rk) cases.push_back({20, rk, d, 0.0, seed, reqs});
    }
    return detail::run_cases(opt, "ii", std::move(cases));
}

inline const std::vector<int>& scenario_three_sizes() {
    static const std::vector<int> v{10, 20, 30};
    return v;
}
inline const std::vector<int>& scenario_three_constellations() {
    static const std::vector<int> v{10, 15, 20};
    return v;
}
inline const std::vector<double>& scenario_three_deltas() {
    static const std::vector<double> v{0.1, 0.05, 0.01, 0.001};
    return v;
}
inline constexpr int kScenarioThreeStarts = 48;

/// Seed of request set j (1-based) of size n.
inline std::uint64_t scenario_three_seed(std::uint64_t base_seed, int n, int j) {
    return derive_seed(base_seed, static_cast<std::uint64_t>(n) * 1000u + static_cast<std::uint64_t>(j));
}

/// N x R=K x delta x start j with tau = 0.5 (j - 1); rows ordered by (N, R, delta, j).
inline std::vector<ScenarioResult> scenario_three(const HarnessOptions& opt, std::uint64_t base_seed) {
    std::vector<detail::CaseSpec> cases;
    for (int n : scenario_three_sizes()) {
        for (int rk : scenario_three_constellations()) {
            for (double d : scenario_three_deltas()) {
                for (int j = 1; j <= kScenarioThreeStarts; ++j) {
                    const auto seed = scenario_three_seed(base_seed, n, j);
                    cases.push_back({n, rk, d, 0.5 * (j - 1), seed, generate_requests(seed, n, opt.stations.size())});
                }
            }
        }
    }
    return detail::run_cases(opt, "iii", std::move(cases));
}

// ---------------------------------------------------------------------------
// Aggregation and CSV output

struct AggregateRow {
    int n = 0;
    int rings = 0;
    double delta = 0.0;
    int cases = 0;
    int limited = 0;
    double mean_ratio_greedy = 0.0;
    double mean_ratio_restricted = 0.0;
    double mean_time_greedy_s = 0.0;
    double mean_time_exact_s = 0.0;
    double median_time_greedy_s = 0.0;
    double median_time_exact_s = 0.0;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// One row per (N, R, delta) in first-appearance order. Ratio means skip
/// limited cases; runtime statistics use every case.
inline std::vector<AggregateRow> aggregate(const std::vector<ScenarioResult>& rows) {
    std::vector<AggregateRow> out;
    std::vector<std::vector<const ScenarioResult*>> members;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRow& a) {
            return a.n == r.n && a.rings == r.rings && a.delta == r.delta;
        });
        if (it == out.end()) {
            out.push_back({r.n, r.rings, r.delta});
            members.emplace_back();
            it = out.end() - 1;
        }
        members[static_cast<std::size_t>(it - out.begin())].push_back(&r);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& a = out[k];
        std::vector<double> tg, te;
        int counted = 0;
        for (const auto* r : members[k]) {
            ++a.cases;
            tg.push_back(r->greedy.runtime_s);
            te.push_back(r->exact.runtime_s);
            if (r->limited()) {
                ++a.limited;
                continue;
            }
            ++counted;
            a.mean_ratio_greedy += r->ratio_greedy;
            a.mean_ratio_restricted += r->ratio_restricted;
        }
        if (counted > 0) {
            a.mean_ratio_greedy /= counted;
            a.mean_ratio_restricted /= counted;
        }
        for (double t : tg) a.mean_time_greedy_s += t / static_cast<double>(tg.size());
        for (double t : te) a.mean_time_exact_s += t / static_cast<double>(te.size());
        a.median_time_greedy_s = median(tg);
        a.median_time_exact_s = median(te);
    }
    return out;
}

inline constexpr const char* kResultHeader =
    "scenario,N,R,K,delta,tau,seed,reward_greedy,reward_exact,reward_rexact,time_greedy_s,time_exact_s,ratio_greedy,ratio_rexact";

inline std::string to_csv_line(const ScenarioResult& r, bool include_times = true) {
    char buf[512];
    const double tg = include_times ? r.greedy.runtime_s : 0.0;
    const double te = include_times ? r.exact.runtime_s : 0.0;
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.3f,%.1f,%llu,%ld,%ld,%ld,%.6f,%.6f,%.6f,%.6f", r.scenario.c_str(), r.n,
                  r.rings, r.sats_per_ring, r.delta, r.tau, static_cast<unsigned long long>(r.seed), r.greedy.reward,
                  r.exact.reward, r.restricted.reward, tg, te, r.ratio_greedy, r.ratio_restricted);
    return buf;
}

inline void write_results_csv(std::ostream& os, const std::vector<ScenarioResult>& rows, bool include_times = true) {
    os << kResultHeader << '\n';
    for (const auto& r : rows) os << to_csv_line(r, include_times) << '\n';
}

inline constexpr const char* kAggregateHeader =
    "N,R,delta,cases,limited,mean_ratio_greedy,mean_ratio_rexact,mean_time_greedy_s,mean_time_exact_s,"
    "median_time_greedy_s,median_time_exact_s";

inline void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << kAggregateHeader << '\n';
    for (const auto& a : rows) {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%d,%d,%.3f,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", a.n, a.rings, a.delta, a.cases,
                      a.limited, a.mean_ratio_greedy, a.mean_ratio_restricted, a.mean_time_greedy_s,
                      a.mean_time_exact_s, a.median_time_greedy_s, a.median_time_exact_s);
        os << buf << '\n';
    }
}

}  // namespace qsat
