#include "ensp/microcanonical.hpp"

#include <algorithm>
#include <numeric>

#include "ensp/errors.hpp"

namespace ensp {

Graph sample_mic_edge_count(int n, std::int64_t L, Rng& rng) {
    const std::int64_t M = pair_count(n);
    if (L < 0 || L > M)
        throw config_error("edge count " + std::to_string(L) + " out of range [0, " +
                           std::to_string(M) + "]");
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(M));
    std::iota(idx.begin(), idx.end(), 0u);
    PairBits b(n);
    // Walk rows to translate the chosen pair indices back to (i,j).
    for (std::int64_t t = 0; t < L; ++t) {
        const std::int64_t pick = t + static_cast<std::int64_t>(
                                          uniform_below(rng, static_cast<std::uint64_t>(M - t)));
        std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick)]);
        std::int64_t k = idx[static_cast<std::size_t>(t)];
        int i = 0;
        while (k >= n - 1 - i) {
            k -= n - 1 - i;
            ++i;
        }
        b.set(i, i + 1 + static_cast<int>(k));
    }
    return Graph(std::move(b));
}

Graph sample_mic_edge_count(int n, std::int64_t L, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return sample_mic_edge_count(n, L, rng);
}

Graph havel_hakimi_realization(const ConstraintSpec& spec) {
    if (spec.kind != ConstraintKind::DegreeSequence)
        throw config_error("degree realization needs a degree-sequence constraint");
    spec.validate();
    if (!is_graphical(spec)) throw config_error("constraint is not graphical");
    const int n = spec.n;
    PairBits b(n);
    std::vector<std::pair<int, int>> rem;  // (residual degree, vertex)
    rem.reserve(n);
    for (int i = 0; i < n; ++i) rem.emplace_back(spec.degrees[i], i);
    for (int round = 0; round < n; ++round) {
        std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        const int d = rem[0].first;
        if (d == 0) break;
        if (d >= static_cast<int>(rem.size()))
            throw config_error("degree sequence not realizable");
        const int v = rem[0].second;
        rem[0].first = 0;
        for (int t = 1; t <= d; ++t) {
            if (rem[t].first <= 0) throw config_error("degree sequence not realizable");
            b.set(v, rem[t].second);
            --rem[t].first;
        }
    }
    return Graph(std::move(b));
}

DegreeSampler::DegreeSampler(const ConstraintSpec& spec, const MicSamplerConfig& config,
                             std::uint64_t seed)
    : spec_(spec), config_(config), rng_(make_rng(seed)) {
    if (spec_.kind != ConstraintKind::DegreeSequence)
        throw config_error("DegreeSampler needs a degree-sequence constraint");
    spec_.validate();
    if (!is_graphical(spec_)) throw config_error("constraint is not graphical");
    if (config_.thinning_swaps == 0) throw config_error("thinning must be >= 1");

    method_ = config_.method;
    if (method_ == MicMethod::UniformEdgeSubset)
        throw config_error("uniform_edge_subset does not preserve a degree sequence");
    if (method_ == MicMethod::Auto) {
        const int max_deg = spec_.degrees.empty()
                                ? 0
                                : *std::max_element(spec_.degrees.begin(), spec_.degrees.end());
        method_ = (max_deg <= 3 && spec_.n <= 10000) ? MicMethod::PairingRejection
                                                     : MicMethod::EdgeSwapMcmc;
    }

    if (method_ == MicMethod::EdgeSwapMcmc) {
        const Graph start = havel_hakimi_realization(spec_);
        adj_ = start.bits();
        edges_.clear();
        start.for_each_edge([&](int i, int j) { edges_.emplace_back(i, j); });
        const std::int64_t E = static_cast<std::int64_t>(edges_.size());
        burn_in_ = config_.burn_in_swaps >= 0 ? config_.burn_in_swaps : 20 * E;
        thinning_ = config_.thinning_swaps >= 1 ? config_.thinning_swaps
                                                : std::max<std::int64_t>(1, 5 * E);
    } else {
        stubs_.clear();
        for (int i = 0; i < spec_.n; ++i)
            for (int k = 0; k < spec_.degrees[i]; ++k) stubs_.push_back(i);
    }
}

// One proposed double-edge swap; counted whether or not it is applied.
void DegreeSampler::swap_attempts(std::int64_t count) {
    const std::size_t E = edges_.size();
    if (E < 2) return;  // at most one realization reachable, nothing to do
    for (std::int64_t t = 0; t < count; ++t) {
        const std::size_t e1 = static_cast<std::size_t>(uniform_below(rng_, E));
        std::size_t e2 = static_cast<std::size_t>(uniform_below(rng_, E - 1));
        if (e2 >= e1) ++e2;
        auto [a, b] = edges_[e1];
        auto [c, d] = edges_[e2];
        if (bernoulli(rng_, 0.5)) std::swap(c, d);
        if (a == c || a == d || b == c || b == d) continue;
        if (adj_.test(a, c) || adj_.test(b, d)) continue;
        adj_.clear(a, b);
        adj_.clear(c, d);
        adj_.set(a, c);
        adj_.set(b, d);
        edges_[e1] = {std::min(a, c), std::max(a, c)};
        edges_[e2] = {std::min(b, d), std::max(b, d)};
    }
}

Graph DegreeSampler::pairing_draw() {
    PairBits b(spec_.n);
    for (std::int64_t attempt = 0; attempt < config_.max_rejections; ++attempt) {
        // Fisher-Yates over the half-edge stubs, then pair consecutive stubs.
        for (std::size_t t = stubs_.size(); t > 1; --t) {
            const std::size_t r = static_cast<std::size_t>(uniform_below(rng_, t));
            std::swap(stubs_[t - 1], stubs_[r]);
        }
        b = PairBits(spec_.n);
        bool ok = true;
        for (std::size_t k = 0; k + 1 < stubs_.size(); k += 2) {
            const int u = stubs_[k], v = stubs_[k + 1];
            if (u == v || b.test(u, v)) {
                ok = false;
                break;
            }
            b.set(u, v);
        }
        if (ok) return Graph(std::move(b));
    }
    throw convergence_error("half-edge pairing exceeded max_rejections",
                            static_cast<double>(config_.max_rejections));
}

Graph DegreeSampler::next() {
    if (method_ == MicMethod::PairingRejection) return pairing_draw();
    if (!warmed_) {
        swap_attempts(burn_in_);
        warmed_ = true;
    } else {
        swap_attempts(thinning_);
    }
    return Graph(adj_);
}

Graph sample_mic_degrees(const ConstraintSpec& spec, const MicSamplerConfig& config,
                         std::uint64_t seed) {
    DegreeSampler sampler(spec, config, seed);
    return sampler.next();
}

}  // namespace ensp
