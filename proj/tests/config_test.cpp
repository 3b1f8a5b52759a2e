#include <gtest/gtest.h>

#include "qsat/config.hpp"

using namespace qsat;
using nlohmann::json;

TEST(RunConfig, DefaultsAreValid) {
    const auto c = parse_run_config(json::object());
    EXPECT_EQ(c.constellation.rings, 10);
    EXPECT_EQ(c.constellation.sats_per_ring, 10);
    EXPECT_EQ(c.scenario, "iii");
    EXPECT_TRUE(c.solvers.allow_isl);
    EXPECT_FALSE(c.solvers.allow_ground_transit);
    EXPECT_FALSE(c.solvers.time_limit_s);
}

TEST(RunConfig, ReadsEverySection) {
    const auto c = parse_run_config(json::parse(R"({
        "constellation": {"rings": 6, "sats_per_ring": 8, "altitude_km": 600,
                          "phase_offset": {"mode": "walker", "spread_deg": 45}},
        "stations_csv": "x.csv", "seed": 9, "channel_seed": 4, "resource_default": 7,
        "requests": 12, "scenario": "ii", "threads": 2, "out_dir": "res",
        "solvers": {"greedy": false, "allow_isl": false, "time_limit_s": 30, "effort_limit": null}
    })"));
    EXPECT_EQ(c.constellation.rings, 6);
    EXPECT_EQ(c.constellation.sats_per_ring, 8);
    EXPECT_EQ(c.constellation.altitude_km, 600);
    EXPECT_EQ(c.constellation.phase_offset_mode, PhaseOffsetMode::Walker);
    EXPECT_EQ(c.constellation.walker_spread_deg, 45);
    EXPECT_EQ(c.stations_csv, "x.csv");
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.channel_seed, 4u);
    EXPECT_EQ(c.resource_default, 7);
    EXPECT_EQ(c.requests, 12);
    EXPECT_EQ(c.scenario, "ii");
    EXPECT_EQ(c.threads, 2u);
    EXPECT_EQ(c.out_dir, "res");
    EXPECT_FALSE(c.solvers.greedy);
    EXPECT_FALSE(c.solvers.allow_isl);
    EXPECT_EQ(c.solvers.time_limit_s, 30.0);
    EXPECT_FALSE(c.solvers.effort_limit);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_run_config(json::parse(R"({"sed": 1})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"constellation": {"ring": 3}})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"solvers": {"isl": true}})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"seed": "one"})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"scenario": "iv"})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"constellation": {"rings": 0}})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"solvers": {"time_limit_s": -1}})")), std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse(R"({"constellation": {"phase_offset": {"mode": "spiral"}}})")),
                 std::invalid_argument);
    EXPECT_THROW(parse_run_config(json::parse("[1, 2]")), std::invalid_argument);
}

TEST(RunConfig, LoadReportsMissingAndInvalidFiles) {
    EXPECT_THROW(load_run_config("/nonexistent/config.json"), std::runtime_error);
}
