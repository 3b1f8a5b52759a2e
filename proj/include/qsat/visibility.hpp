// Line-of-sight communication ranges and the window test that decides
// logical-graph edges.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsat/geometry.hpp"

namespace qsat {

/// The interval [tau, tau + delta] during which links must stay up.
struct TimeWindow {
    double tau = 0.0;    ///< hours
    double delta = 0.0;  ///< hours

    void validate() const {
        if (!std::isfinite(tau) || tau < 0.0) throw std::invalid_argument("tau must be >= 0");
        if (!std::isfinite(delta) || delta < 0.0) throw std::invalid_argument("delta must be >= 0");
    }
};

/// Slant range at zero elevation.
inline double range_ground_sat(const ConstellationConfig& cfg) {
    const double a = cfg.orbit_radius_km();
    const double re = cfg.earth_radius_km;
    return std::sqrt(std::max(0.0, a * a - re * re));
}

/// Longest chord between two satellites that clears the atmosphere cutoff.
inline double range_sat_sat(const ConstellationConfig& cfg) {
    const double a = cfg.orbit_radius_km();
    const double floor_r = cfg.earth_radius_km + cfg.atmosphere_cutoff_km;
    return 2.0 * std::sqrt(std::max(0.0, a * a - floor_r * floor_r));
}

/// Sample times for a window: tau + k*step for k*step < delta, plus tau + delta.
/// An endpoint within 1e-9 h of the grid snaps onto it, so grid-aligned windows
/// sharing tau have nested sample sets.
inline std::vector<double> window_samples(const TimeWindow& w, double step) {
    std::vector<double> t;
    const double ratio = w.delta / step;
    const double nearest = std::round(ratio);
    const bool on_grid = std::abs(ratio - nearest) * step < 1e-9;
    const long last = on_grid ? static_cast<long>(nearest) : static_cast<long>(std::floor(ratio));
    t.reserve(static_cast<std::size_t>(last) + 2);
    for (long k = 0; k <= last; ++k) t.push_back(w.tau + static_cast<double>(k) * step);
    if (!on_grid) t.push_back(w.tau + w.delta);
    return t;
}

/// Communication range applying to a node pair; 0 for ground-ground (never linked).
inline double pair_range(const ConstellationConfig& cfg, const NodeId& a, const NodeId& b) {
    if (a.is_ground() && b.is_ground()) return 0.0;
    if (a.is_satellite() && b.is_satellite()) return range_sat_sat(cfg);
    return range_ground_sat(cfg);
}

inline double max_distance_over_window(const PhysicalNetwork& net, const NodeId& a, const NodeId& b,
                                       const TimeWindow& w) {
    if (a == b) throw std::invalid_argument("max_distance_over_window needs two distinct nodes");
    double best = 0.0;
    for (double t : window_samples(w, net.cfg.sample_step_h)) {
        best = std::max(best, distance(net.position(a, t), net.position(b, t)));
    }
    return best;
}

inline bool edge_feasible(const PhysicalNetwork& net, const NodeId& a, const NodeId& b, const TimeWindow& w) {
    if (a == b) throw std::invalid_argument("edge_feasible needs two distinct nodes");
    if (a.is_ground() && b.is_ground()) return false;
    return max_distance_over_window(net, a, b, w) <= pair_range(net.cfg, a, b);
}

}  // namespace qsat
