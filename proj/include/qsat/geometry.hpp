// Positions of a Walker-Star constellation and fixed ground stations in an
// Earth-centered inertial frame.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsat {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Vec3 {
    double x = 0.0;  ///< km
    double y = 0.0;  ///< km
    double z = 0.0;  ///< km

    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool operator==(const Vec3&) const = default;
};

inline double distance(const Vec3& p, const Vec3& q) { return (p - q).norm(); }

/// Geographic coordinate in degrees. Use normalized() before feeding
/// user-supplied values into the geometry.
struct GeoCoord {
    double lat = 0.0;  ///< [-90, 90]
    double lon = 0.0;  ///< (-180, 180]

    GeoCoord normalized() const {
        if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) {
            throw std::invalid_argument("latitude must be finite and within [-90, 90]");
        }
        double l = std::fmod(lon, 360.0);
        if (l <= -180.0) l += 360.0;
        if (l > 180.0) l -= 360.0;
        return {lat, l};
    }
};

enum class PhaseOffsetMode { None, Walker };

struct ConstellationConfig {
    int rings = 1;
    int sats_per_ring = 1;
    double altitude_km = 550.0;
    double period_h = 1.5;
    double earth_radius_km = 6371.0;
    double earth_rotation_deg_per_h = 15.0;
    double atmosphere_cutoff_km = 85.0;  // ISL line of sight must clear this altitude
    PhaseOffsetMode phase_offset_mode = PhaseOffsetMode::None;
    double walker_spread_deg = 0.0;  // only used in Walker mode
    double sample_step_h = 0.001;

    double orbit_radius_km() const { return earth_radius_km + altitude_km; }
    int satellite_count() const { return rings * sats_per_ring; }

    void validate() const {
        if (rings < 1 || sats_per_ring < 1) throw std::invalid_argument("rings and sats_per_ring must be >= 1");
        if (!(altitude_km > 0.0)) throw std::invalid_argument("altitude_km must be > 0");
        if (!(period_h > 0.0)) throw std::invalid_argument("period_h must be > 0");
        if (!(earth_radius_km > 0.0)) throw std::invalid_argument("earth_radius_km must be > 0");
        if (!(sample_step_h > 0.0)) throw std::invalid_argument("sample_step_h must be > 0");
        if (atmosphere_cutoff_km < 0.0) throw std::invalid_argument("atmosphere_cutoff_km must be >= 0");
    }
};

/// A physical node. Canonical ids: ground g -> g, satellite (r, k) -> G + r*K + k.
struct NodeId {
    enum class Kind : std::uint8_t { Ground, Satellite };
    Kind kind = Kind::Ground;
    int index = 0;  // ground station index
    int ring = 0;
    int slot = 0;

    static NodeId ground(int g) { return {Kind::Ground, g, 0, 0}; }
    static NodeId satellite(int r, int k) { return {Kind::Satellite, 0, r, k}; }

    bool is_ground() const { return kind == Kind::Ground; }
    bool is_satellite() const { return kind == Kind::Satellite; }
    bool operator==(const NodeId&) const = default;

    int canonical(int ground_count, int sats_per_ring) const {
        return is_ground() ? index : ground_count + ring * sats_per_ring + slot;
    }
    static NodeId from_canonical(int id, int ground_count, int sats_per_ring) {
        if (id < ground_count) return ground(id);
        const int s = id - ground_count;
        return satellite(s / sats_per_ring, s % sats_per_ring);
    }
    std::string label() const {
        return is_ground() ? "G" + std::to_string(index)
                           : "S" + std::to_string(ring) + "." + std::to_string(slot);
    }
};

/// Per-ring phase offset in degrees.
inline double ring_phase_deg(const ConstellationConfig& cfg, int r) {
    if (cfg.phase_offset_mode == PhaseOffsetMode::None) return 0.0;
    return r * (360.0 / (cfg.rings * cfg.sats_per_ring)) * (cfg.walker_spread_deg / 360.0);
}

inline Vec3 satellite_position(const ConstellationConfig& cfg, int r, int k, double tau) {
    if (r < 0 || r >= cfg.rings || k < 0 || k >= cfg.sats_per_ring) {
        throw std::out_of_range("satellite index out of range");
    }
    // (r*180)/R and (k*360)/K are correctly rounded, so equivalent satellites of
    // (R, K) and (nR, mK) land on bit-identical angles.
    const double raan = (r * 180.0) / cfg.rings * kDegToRad;
    const double u_deg = (k * 360.0) / cfg.sats_per_ring + ring_phase_deg(cfg, r) + 360.0 * (tau / cfg.period_h);
    const double u = u_deg * kDegToRad;
    const double a = cfg.orbit_radius_km();
    return {a * std::cos(u) * std::cos(raan), a * std::cos(u) * std::sin(raan), a * std::sin(u)};
}

inline Vec3 ground_position(const ConstellationConfig& cfg, const GeoCoord& geo, double tau) {
    const double phi = geo.lat * kDegToRad;
    const double lam = (geo.lon + cfg.earth_rotation_deg_per_h * tau) * kDegToRad;
    const double re = cfg.earth_radius_km;
    return {re * std::cos(phi) * std::cos(lam), re * std::cos(phi) * std::sin(lam), re * std::sin(phi)};
}

/// Constellation plus ground stations: everything needed to place a node in time.
struct PhysicalNetwork {
    ConstellationConfig cfg;
    std::vector<GeoCoord> stations;

    int ground_count() const { return static_cast<int>(stations.size()); }
    int node_count() const { return ground_count() + cfg.satellite_count(); }

    NodeId node(int canonical_id) const {
        if (canonical_id < 0 || canonical_id >= node_count()) throw std::out_of_range("node id out of range");
        return NodeId::from_canonical(canonical_id, ground_count(), cfg.sats_per_ring);
    }
    int id(const NodeId& n) const { return n.canonical(ground_count(), cfg.sats_per_ring); }

    Vec3 position(const NodeId& n, double tau) const {
        if (n.is_ground()) {
            if (n.index < 0 || n.index >= ground_count()) throw std::out_of_range("ground index out of range");
            return ground_position(cfg, stations[static_cast<std::size_t>(n.index)], tau);
        }
        return satellite_position(cfg, n.ring, n.slot, tau);
    }
};

}  // namespace qsat
