#pragma once

#include <cstdint>

namespace lacuna {

// Counter-based generator: one output word per (seed, index) pair, no state.
// Every Monte Carlo draw in the library addresses this directly, so sampled
// sets are reproducible bit-for-bit regardless of evaluation order or worker
// count.  The construction is the splitmix64 output function applied to the
// seed-offset counter stream.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t index) const {
        return splitmix64(splitmix64(seed) + index * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    // +1 / -1 with equal probability.
    int sign(std::uint64_t index) const { return (bits(index) & 1u) ? +1 : -1; }

    // Independent substream, e.g. one per Monte Carlo trial.
    CounterRng derive(std::uint64_t tag) const {
        return CounterRng{splitmix64(splitmix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL) + tag)};
    }
};

}  // namespace lacuna
