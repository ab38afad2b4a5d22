#pragma once

#include <cstdint>
#include <random>

namespace ensp {

// All randomness flows through mt19937_64 seeded from an explicit 64-bit
// seed.  Uniform doubles and bounded ints are mapped from raw 64-bit output
// here rather than through std::*_distribution, so the sampled sequences are
// identical across standard-library implementations.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Child seed for stream `index` of a master seed.  Used for per-sample and
// per-worker streams; the derivation is a pure function, so a sample's
// stream does not depend on which worker runs it.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0,1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) by rejection; bound >= 1.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace ensp
