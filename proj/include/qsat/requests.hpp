// Connection requests and seeded batch generation.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsat/rng.hpp"
#include "qsat/visibility.hpp"

namespace qsat {

/// (source, destination, demand, reward). Endpoints are ground station indices.
struct Request {
    int src = 0;
    int dst = 1;
    int demand = 1;
    int reward = 1;
    int index = 0;  ///< position in its batch

    void validate() const {
        if (src == dst) throw std::invalid_argument("request source and destination must differ");
        if (src < 0 || dst < 0) throw std::invalid_argument("request endpoint index must be >= 0");
        if (demand < 1) throw std::invalid_argument("request demand must be >= 1");
        if (reward < 1) throw std::invalid_argument("request reward must be >= 1");
    }
    bool operator==(const Request&) const = default;
};

struct RequestBatch {
    std::vector<Request> requests;
    TimeWindow window;

    int size() const { return static_cast<int>(requests.size()); }
};

/// n requests over `station_count` stations. Per request, in draw order:
/// src = U(G), dst = U(G) redrawn until != src, demand = 1 + U(5), reward = 1 + U(5).
inline std::vector<Request> generate_requests(std::uint64_t seed, int n, int station_count) {
    if (station_count < 2) throw std::invalid_argument("need at least two ground stations");
    if (n < 0) throw std::invalid_argument("request count must be >= 0");
    CounterRng rng(seed);
    const auto g = static_cast<std::uint64_t>(station_count);
    std::vector<Request> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Request r;
        r.index = i;
        r.src = static_cast<int>(rng.uniform(g));
        do {
            r.dst = static_cast<int>(rng.uniform(g));
        } while (r.dst == r.src);
        r.demand = 1 + static_cast<int>(rng.uniform(5));
        r.reward = 1 + static_cast<int>(rng.uniform(5));
        out.push_back(r);
    }
    return out;
}

}  // namespace qsat
