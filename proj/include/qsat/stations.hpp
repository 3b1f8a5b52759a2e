// Ground-station dataset (CSV `name,lat_deg,lon_deg`) and manual request batches.
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsat/geometry.hpp"
#include "qsat/requests.hpp"

namespace qsat {

struct StationSet {
    std::vector<std::string> names;
    std::vector<GeoCoord> coords;

    int size() const { return static_cast<int>(names.size()); }

    int index_of(const std::string& name) const {
        for (int i = 0; i < size(); ++i) {
            if (names[static_cast<std::size_t>(i)] == name) return i;
        }
        return -1;
    }
};

inline StationSet parse_stations(std::istream& in) {
    StationSet set;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("stations csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "name,lat_deg,lon_deg") throw std::runtime_error("stations csv: expected header name,lat_deg,lon_deg");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string name, lat, lon, extra;
        if (!std::getline(ss, name, ',') || !std::getline(ss, lat, ',') || !std::getline(ss, lon, ',') ||
            std::getline(ss, extra, ',')) {
            throw std::runtime_error("stations csv line " + std::to_string(lineno) + ": expected 3 fields");
        }
        if (name.empty() || name.find_first_of(" \t") != std::string::npos) {
            throw std::runtime_error("stations csv line " + std::to_string(lineno) + ": name must be non-empty without spaces");
        }
        if (set.index_of(name) >= 0) throw std::runtime_error("stations csv: duplicate station " + name);
        try {
            std::size_t a = 0, b = 0;
            GeoCoord g{std::stod(lat, &a), std::stod(lon, &b)};
            if (a != lat.size() || b != lon.size()) throw std::invalid_argument("trailing characters");
            set.coords.push_back(g.normalized());
        } catch (const std::exception& e) {
            throw std::runtime_error("stations csv line " + std::to_string(lineno) + ": " + e.what());
        }
        set.names.push_back(name);
    }
    if (set.size() == 0) throw std::runtime_error("stations csv: no stations");
    return set;
}

inline StationSet load_stations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stations file " + path);
    return parse_stations(in);
}

/// One request per line: `src_city dst_city demand reward`. Blank lines and
/// lines starting with '#' are skipped. All unknown city names are reported
/// together.
inline std::vector<Request> parse_batch(std::istream& in, const StationSet& stations) {
    std::vector<Request> out;
    std::vector<std::string> unknown;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream ss(line);
        std::string src, dst, extra;
        int d = 0, w = 0;
        if (!(ss >> src) || src.front() == '#') continue;
        if (!(ss >> dst >> d >> w) || (ss >> extra)) {
            throw std::runtime_error("batch line " + std::to_string(lineno) + ": expected `src dst demand reward`");
        }
        Request r;
        r.src = stations.index_of(src);
        r.dst = stations.index_of(dst);
        if (r.src < 0) unknown.push_back(src);
        if (r.dst < 0) unknown.push_back(dst);
        r.demand = d;
        r.reward = w;
        r.index = static_cast<int>(out.size());
        if (r.src >= 0 && r.dst >= 0) r.validate();
        out.push_back(r);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown stations in batch:";
        for (const auto& u : unknown) msg += " " + u;
        throw std::runtime_error(msg);
    }
    return out;
}

}  // namespace qsat
