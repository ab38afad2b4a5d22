#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ensp/constraint.hpp"
#include "ensp/graph.hpp"
#include "ensp/rng.hpp"

namespace ensp {

enum class MicMethod { Auto, EdgeSwapMcmc, PairingRejection, UniformEdgeSubset };

struct MicSamplerConfig {
    MicMethod method = MicMethod::Auto;
    std::int64_t burn_in_swaps = -1;   // -1: use 20 * |E|
    std::int64_t thinning_swaps = -1;  // -1: use 5 * |E|
    std::int64_t max_rejections = 1000000;
};

// Uniform draw from all graphs with exactly L edges: partial Fisher-Yates
// over the n(n-1)/2 pair indices.
Graph sample_mic_edge_count(int n, std::int64_t L, Rng& rng);
Graph sample_mic_edge_count(int n, std::int64_t L, std::uint64_t seed);

// Deterministic greedy realization of a graphical degree sequence.
Graph havel_hakimi_realization(const ConstraintSpec& spec);

// Uniform sampler over the graphs with a fixed degree sequence.  Holds the
// Markov-chain (or half-edge) working state; one instance per RNG stream.
class DegreeSampler {
public:
    DegreeSampler(const ConstraintSpec& spec, const MicSamplerConfig& config,
                  std::uint64_t seed);

    // Next thinned sample.  The first call runs the burn-in leg.
    Graph next();

    MicMethod method() const { return method_; }
    const ConstraintSpec& spec() const { return spec_; }

private:
    void swap_attempts(std::int64_t count);
    Graph pairing_draw();

    ConstraintSpec spec_;
    MicSamplerConfig config_;
    MicMethod method_ = MicMethod::EdgeSwapMcmc;
    Rng rng_;
    PairBits adj_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> stubs_;
    std::int64_t burn_in_ = 0;
    std::int64_t thinning_ = 1;
    bool warmed_ = false;
};

// One-shot convenience wrapper around DegreeSampler.
Graph sample_mic_degrees(const ConstraintSpec& spec, const MicSamplerConfig& config,
                         std::uint64_t seed);

}  // namespace ensp
