#pragma once

// SplitMix64 pseudo-random generator (Steele, Lea, Flood constants).
// Every randomized generator in this library draws from this engine so a
// given 64-bit seed reproduces the same stream on every platform.

#include <cstdint>

#include "bmatch/core.hpp"

namespace bmatch {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound); the biased tail above the largest multiple of
    // bound is rejected and redrawn.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0)
            throw Error("next_below: bound must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            std::uint64_t x = next_u64();
            if (x < limit)
                return x % bound;
        }
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace bmatch
