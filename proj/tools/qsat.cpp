// qsat: build logical graphs, solve request batches, run the evaluation scenarios.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsat/config.hpp"
#include "qsat/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qsat;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> stations;
    std::optional<int> rings;
    std::optional<int> sats_per_ring;
    std::optional<double> time_limit_s;
    std::optional<unsigned> threads;
    bool no_isl = false;
    bool ground_transit = false;
};

RunConfig resolve(const Common& c) {
    RunConfig cfg = c.config.empty() ? RunConfig{} : load_run_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.out_dir) cfg.out_dir = *c.out_dir;
    if (c.stations) cfg.stations_csv = *c.stations;
    if (c.rings) cfg.constellation.rings = *c.rings;
    if (c.sats_per_ring) cfg.constellation.sats_per_ring = *c.sats_per_ring;
    if (c.time_limit_s) cfg.solvers.time_limit_s = *c.time_limit_s;
    if (c.threads) cfg.threads = *c.threads;
    if (c.no_isl) cfg.solvers.allow_isl = false;
    if (c.ground_transit) cfg.solvers.allow_ground_transit = true;
    cfg.validate();
    return cfg;
}

fs::path out_path(const RunConfig& cfg, const std::string& file) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / file;
}

json node_json(const NodeId& n) {
    if (n.is_ground()) return {{"kind", "ground"}, {"index", n.index}};
    return {{"kind", "satellite"}, {"ring", n.ring}, {"slot", n.slot}};
}

json graph_json(const LogicalGraph& g, const StationSet& st) {
    json vs = json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& r = g.resources(v);
        json n = node_json(g.node(v));
        n["id"] = v;
        if (g.is_ground(v)) n["name"] = st.names[static_cast<std::size_t>(v)];
        n["transmitters"] = r.transmitters;
        n["receivers"] = r.receivers;
        n["memories"] = r.memories;
        vs.push_back(std::move(n));
    }
    json es = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        es.push_back({{"u", g.edge(e).u}, {"v", g.edge(e).v}, {"channels", g.channels(e)}});
    }
    return {{"tau", g.window().tau}, {"delta", g.window().delta}, {"vertices", vs}, {"edges", es}};
}

json solution_json(const Solution& s, const RequestBatch& b) {
    json paths = json::array();
    for (const auto& [i, p] : s.paths) {
        paths.push_back({{"request", i}, {"demand", b.requests[static_cast<std::size_t>(i)].demand}, {"vertices", p.vertices}});
    }
    return {{"solver", to_string(s.solver)},
            {"total_reward", s.total_reward},
            {"proven_optimal", s.proven_optimal},
            {"runtime_s", s.runtime_s},
            {"served", s.served},
            {"paths", paths}};
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << j.dump(1) << '\n';
}

PhysicalNetwork network_of(const RunConfig& cfg, const StationSet& st) {
    return PhysicalNetwork{cfg.constellation, st.coords};
}

ExactOptions exact_options(const RunConfig& cfg) {
    ExactOptions o;
    o.rules = {cfg.solvers.allow_isl, cfg.solvers.allow_ground_transit};
    o.time_limit_s = cfg.solvers.time_limit_s;
    o.effort_limit = cfg.solvers.effort_limit;
    return o;
}

int cmd_graph(const RunConfig& cfg, TimeWindow w) {
    w.validate();
    const auto st = load_stations(cfg.stations_csv);
    const auto g = build_logical_graph(network_of(cfg, st), w, cfg.channel_seed, cfg.resource_default);
    const auto path = out_path(cfg, "graph.json");
    write_json(path, graph_json(g, st));
    std::printf("vertices %d ground_connected %d edges %d sat_sat_edges %d\n", g.vertex_count(),
                g.ground_connected_count(), g.edge_count(), g.sat_sat_edge_count());
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

int cmd_solve(const RunConfig& cfg, TimeWindow w, const std::string& batch_file, std::optional<int> n_requests) {
    w.validate();
    const auto st = load_stations(cfg.stations_csv);
    RequestBatch batch{{}, w};
    if (!batch_file.empty()) {
        std::ifstream in(batch_file);
        if (!in) throw std::runtime_error("cannot open batch " + batch_file);
        batch.requests = parse_batch(in, st);
    } else {
        batch.requests = generate_requests(cfg.seed, n_requests.value_or(cfg.requests), st.size());
    }
    const auto g = build_logical_graph(network_of(cfg, st), w, cfg.channel_seed, cfg.resource_default);
    const RoutingRules rules{cfg.solvers.allow_isl, cfg.solvers.allow_ground_transit};

    int status = 0;
    auto report = [&](const char* label, const Solution& s, const RoutingRules& r) {
        const auto rep = verify_solution(g, batch, s, r);
        for (const auto& v : rep.violations) std::fprintf(stderr, "%s: %s\n", label, v.c_str());
        if (!rep.ok()) status = 3;
        write_json(out_path(cfg, std::string("solution_") + label + ".json"), solution_json(s, batch));
        std::printf("%s reward %ld served %zu%s time %.6f\n", label, s.total_reward, s.served.size(),
                    s.solver != SolverKind::Greedy && !s.proven_optimal ? " (limit)" : "", s.runtime_s);
    };
    if (cfg.solvers.greedy) report("greedy", greedy_solve(g, batch, rules), rules);
    if (cfg.solvers.exact) report("exact", exact_solve(g, batch, exact_options(cfg)), rules);
    if (cfg.solvers.restricted) {
        auto o = exact_options(cfg);
        o.rules.allow_isl = false;
        report("rexact", exact_solve(g, batch, o), o.rules);
    }
    return status;
}

int cmd_scenario(const RunConfig& cfg, const std::string& id) {
    HarnessOptions opt;
    opt.base = cfg.constellation;
    opt.stations = load_stations(cfg.stations_csv);
    opt.channel_seed = cfg.channel_seed;
    opt.resource_default = cfg.resource_default;
    opt.exact = exact_options(cfg);
    opt.threads = cfg.threads;
    opt.log = &std::cerr;

    std::vector<ScenarioResult> rows;
    if (id == "i") rows = scenario_one(opt);
    else if (id == "ii") rows = scenario_two(opt, cfg.seed);
    else rows = scenario_three(opt, cfg.seed);

    const auto results = out_path(cfg, "scenario_" + id + ".csv");
    std::ofstream out(results);
    if (!out) throw std::runtime_error("cannot write " + results.string());
    write_results_csv(out, rows);
    std::printf("wrote %s (%zu rows)\n", results.string().c_str(), rows.size());
    if (id == "iii") {
        const auto agg = aggregate(rows);
        const auto agg_path = out_path(cfg, "scenario_iii_aggregate.csv");
        std::ofstream a(agg_path);
        if (!a) throw std::runtime_error("cannot write " + agg_path.string());
        write_aggregate_csv(a, agg);
        int limited = 0;
        for (const auto& r : agg) limited += r.limited;
        std::printf("wrote %s; %d limited cases excluded from ratio means\n", agg_path.string().c_str(), limited);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement distribution over satellite constellations"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--seed", c.seed, "Request seed");
        sub->add_option("--out-dir", c.out_dir, "Output directory");
        sub->add_option("--stations", c.stations, "Ground station CSV");
        sub->add_option("--rings", c.rings, "Number of orbital rings R");
        sub->add_option("--sats-per-ring", c.sats_per_ring, "Satellites per ring K");
        sub->add_option("--time-limit-s", c.time_limit_s, "Exact solver wall-clock limit");
        sub->add_option("--threads", c.threads, "Worker threads for scenarios");
        sub->add_flag("--no-isl", c.no_isl, "Forbid satellite-satellite links");
        sub->add_flag("--allow-ground-transit", c.ground_transit, "Allow paths through other ground stations");
    };

    double tau = 0.0, delta = 0.0;
    auto* graph = app.add_subcommand("graph", "Build the logical graph for one window");
    add_common(graph);
    graph->add_option("--tau", tau, "Window start (h)");
    graph->add_option("--delta", delta, "Window length (h)");

    std::string batch_file;
    std::optional<int> n_requests;
    auto* solve = app.add_subcommand("solve", "Solve one request batch");
    add_common(solve);
    solve->add_option("--tau", tau, "Window start (h)");
    solve->add_option("--delta", delta, "Window length (h)");
    auto* batch_opt = solve->add_option("--batch", batch_file, "Manual batch: src_city dst_city demand reward per line");
    solve->add_option("--requests", n_requests, "Random batch size (uses --seed)")->excludes(batch_opt);

    std::string scenario_id;
    auto* scenario = app.add_subcommand("scenario", "Run an evaluation scenario");
    add_common(scenario);
    scenario->add_option("id", scenario_id, "i, ii or iii")->required()->check(CLI::IsMember({"i", "ii", "iii"}));

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = resolve(c);
        if (*graph) return cmd_graph(cfg, {tau, delta});
        if (*solve) return cmd_solve(cfg, {tau, delta}, batch_file, n_requests);
        cfg.scenario = scenario_id;
        return cmd_scenario(cfg, scenario_id);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
