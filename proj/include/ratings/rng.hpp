#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

#include "ratings/errors.hpp"

namespace ratings {

// Master seed for a whole experiment. Every random stream used anywhere is
// derived from it plus a short label tuple, so a run is reproducible
// bit-for-bit from one integer.
struct SeedSpec {
    std::uint64_t master_seed = 1;
};

// SplitMix64 finalizer (Steele/Lea/Flood constants).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// A single-owner random stream. Never share one across threads: derive one
// stream per (cell, trial) label tuple instead.
class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    // SplitMix64: advance by the golden-ratio increment, then finalize.
    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        ++draws_;
        return splitmix64_mix(state_);
    }

    // Uniform in [0, 1): top 53 bits of a 64-bit output, scaled by 2^-53.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // One draw; returns 1 iff uniform < p, so bernoulli(1) == 1 surely.
    int bernoulli(double p) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ParamError("bernoulli probability must lie in [0, 1]");
        }
        return next_uniform() < p ? 1 : 0;
    }

    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

// Derive an independent stream by folding each label into the master seed
// with the SplitMix64 finalizer: state = mix(state + label), left to right.
// Label tuples are (cell-row, cell-col, trial, reserved); at most 4.
inline Stream derive_stream(SeedSpec seed, std::span<const std::uint64_t> labels) {
    if (labels.size() > 4) {
        throw ParamError("derive_stream accepts at most 4 labels");
    }
    std::uint64_t state = seed.master_seed;
    for (std::uint64_t label : labels) {
        state = splitmix64_mix(state + label);
    }
    return Stream(state);
}

inline Stream derive_stream(SeedSpec seed, std::initializer_list<std::uint64_t> labels) {
    return derive_stream(seed, std::span<const std::uint64_t>(labels.begin(), labels.size()));
}

}  // namespace ratings
