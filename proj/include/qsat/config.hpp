// Run configuration: one JSON document, validated before any computation.
//
// {
//   "constellation": {"rings": 10, "sats_per_ring": 10, "altitude_km": 550,
//                     "period_h": 1.5, "earth_radius_km": 6371,
//                     "earth_rotation_deg_per_h": 15, "atmosphere_cutoff_km": 85,
//                     "phase_offset": {"mode": "none"} | {"mode": "walker", "spread_deg": 90},
//                     "sample_step_h": 0.001},
//   "stations_csv": "data/ground_stations.csv",
//   "seed": 1, "channel_seed": 1, "resource_default": 10, "requests": 20,
//   "scenario": "iii",
//   "solvers": {"greedy": true, "exact": true, "restricted": true,
//               "allow_isl": true, "allow_ground_transit": false,
//               "time_limit_s": null, "effort_limit": 3000000000},
//   "threads": 1,
//   "out_dir": "out"
// }
// Every key is optional; unknown keys are rejected.
#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qsat/exact.hpp"
#include "qsat/geometry.hpp"

namespace qsat {

struct SolverToggles {
    bool greedy = true;
    bool exact = true;
    bool restricted = true;
    bool allow_isl = true;
    bool allow_ground_transit = false;
    std::optional<double> time_limit_s;
    std::optional<std::uint64_t> effort_limit = kDefaultEffortLimit;
};

struct RunConfig {
    ConstellationConfig constellation{.rings = 10, .sats_per_ring = 10};
    std::string stations_csv = "data/ground_stations.csv";
    std::uint64_t seed = 1;
    std::uint64_t channel_seed = 1;
    int resource_default = 10;
    int requests = 20;
    std::string scenario = "iii";
    SolverToggles solvers;
    unsigned threads = 1;
    std::string out_dir = "out";

    void validate() const {
        constellation.validate();
        if (resource_default < 0) throw std::invalid_argument("resource_default must be >= 0");
        if (requests < 0) throw std::invalid_argument("requests must be >= 0");
        if (scenario != "i" && scenario != "ii" && scenario != "iii") {
            throw std::invalid_argument("scenario must be one of i, ii, iii");
        }
        if (solvers.time_limit_s && !(*solvers.time_limit_s > 0.0)) throw std::invalid_argument("time_limit_s must be > 0");
        if (threads < 1) throw std::invalid_argument("threads must be >= 1");
        if (stations_csv.empty()) throw std::invalid_argument("stations_csv must be set");
    }
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.contains(k)) throw std::invalid_argument("unknown key '" + k + "' in " + where);
    }
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(where + "." + key + " has the wrong type");
    }
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
    using detail::read;
    RunConfig c;
    detail::reject_unknown(j, {"constellation", "stations_csv", "seed", "channel_seed", "resource_default", "requests",
                               "scenario", "solvers", "threads", "out_dir"},
                           "config");
    if (j.contains("constellation")) {
        const auto& k = j.at("constellation");
        detail::reject_unknown(k, {"rings", "sats_per_ring", "altitude_km", "period_h", "earth_radius_km",
                                   "earth_rotation_deg_per_h", "atmosphere_cutoff_km", "phase_offset", "sample_step_h"},
                               "constellation");
        auto& cc = c.constellation;
        read(k, "rings", cc.rings, "constellation");
        read(k, "sats_per_ring", cc.sats_per_ring, "constellation");
        read(k, "altitude_km", cc.altitude_km, "constellation");
        read(k, "period_h", cc.period_h, "constellation");
        read(k, "earth_radius_km", cc.earth_radius_km, "constellation");
        read(k, "earth_rotation_deg_per_h", cc.earth_rotation_deg_per_h, "constellation");
        read(k, "atmosphere_cutoff_km", cc.atmosphere_cutoff_km, "constellation");
        read(k, "sample_step_h", cc.sample_step_h, "constellation");
        if (k.contains("phase_offset")) {
            const auto& po = k.at("phase_offset");
            detail::reject_unknown(po, {"mode", "spread_deg"}, "phase_offset");
            std::string mode = "none";
            read(po, "mode", mode, "phase_offset");
            if (mode == "none") {
                cc.phase_offset_mode = PhaseOffsetMode::None;
            } else if (mode == "walker") {
                cc.phase_offset_mode = PhaseOffsetMode::Walker;
                read(po, "spread_deg", cc.walker_spread_deg, "phase_offset");
            } else {
                throw std::invalid_argument("phase_offset.mode must be 'none' or 'walker'");
            }
        }
    }
    read(j, "stations_csv", c.stations_csv, "config");
    read(j, "seed", c.seed, "config");
    read(j, "channel_seed", c.channel_seed, "config");
    read(j, "resource_default", c.resource_default, "config");
    read(j, "requests", c.requests, "config");
    read(j, "scenario", c.scenario, "config");
    read(j, "threads", c.threads, "config");
    read(j, "out_dir", c.out_dir, "config");
    if (j.contains("solvers")) {
        const auto& s = j.at("solvers");
        detail::reject_unknown(s, {"greedy", "exact", "restricted", "allow_isl", "allow_ground_transit", "time_limit_s",
                                   "effort_limit"},
                               "solvers");
        read(s, "greedy", c.solvers.greedy, "solvers");
        read(s, "exact", c.solvers.exact, "solvers");
        read(s, "restricted", c.solvers.restricted, "solvers");
        read(s, "allow_isl", c.solvers.allow_isl, "solvers");
        read(s, "allow_ground_transit", c.solvers.allow_ground_transit, "solvers");
        if (s.contains("time_limit_s")) {
            if (s.at("time_limit_s").is_null()) c.solvers.time_limit_s.reset();
            else { double t = 0; read(s, "time_limit_s", t, "solvers"); c.solvers.time_limit_s = t; }
        }
        if (s.contains("effort_limit")) {
            if (s.at("effort_limit").is_null()) c.solvers.effort_limit.reset();
            else { std::uint64_t e = 0; read(s, "effort_limit", e, "solvers"); c.solvers.effort_limit = e; }
        }
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

}  // namespace qsat
