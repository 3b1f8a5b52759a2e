// Portable counter-based random numbers.
//
// Draw k (k = 0, 1, 2, ...) from seed s is
//     mix64(s + (k + 1) * 0x9E3779B97F4A7C15)          (mod 2^64)
// where mix64 is the SplitMix64 finalizer:
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     z =  z ^ (z >> 31)
// This is exactly the SplitMix64 stream seeded with s. A uniform integer in
// [0, n) is taken as the high 64 bits of the 128-bit product draw * n.
#pragma once

#include <cstdint>

namespace qsat {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

    constexpr std::uint64_t next() {
        ++counter_;
        return mix64(seed_ + counter_ * kGoldenGamma);
    }

    /// Uniform in [0, n); n > 0.
    constexpr std::uint64_t uniform(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Uniform real in [0, 1).
    constexpr double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Order-normalized hash of (seed, a, b).
constexpr std::uint64_t pair_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    if (a > b) {
        const auto t = a;
        a = b;
        b = t;
    }
    return mix64(mix64(mix64(seed) ^ a) ^ (b + kGoldenGamma));
}

/// Derive an independent seed from a base seed and a tag.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return mix64(base ^ mix64(tag + kGoldenGamma));
}

}  // namespace qsat
