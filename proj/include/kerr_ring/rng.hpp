#pragma once

#include <cstdint>

namespace kerr_ring {

// splitmix64: tiny, fast, reproducible across platforms. Used for all
// pseudo-random starting points so that outputs are bit-identical for a
// given seed regardless of standard library or thread count.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Decorrelated stream for sub-task k of a run seeded with `seed` (per start,
// per sweep value, per grid cell). Mixing through splitmix keeps streams
// independent of evaluation order, so parallel runs stay deterministic.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t k) {
    SplitMix64 m(seed ^ (0xD1342543DE82EF95ULL * (k + 1)));
    return m.next();
}

} // namespace kerr_ring
