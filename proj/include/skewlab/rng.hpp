#pragma once

#include <cstdint>

namespace skewlab {

// Counter-based generator: value(i) = mix(seed, i) where mix is the
// splitmix64 finalizer applied to seed + (i+1) * 0x9E3779B97F4A7C15.
// Stateless, so any entry of the stream can be produced independently;
// the same (seed, counter) pair is bit-identical across runs and threads.
struct CounterRng {
    std::uint64_t seed = 0;

    explicit CounterRng(std::uint64_t s) : seed(s) {}

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01(std::uint64_t counter) const {
        return double(bits(counter) >> 11) * 0x1.0p-53;
    }
};

} // namespace skewlab
