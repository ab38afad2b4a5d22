#include "ensp/enumeration.hpp"

#include <bit>
#include <cmath>

#include "ensp/canonical.hpp"
#include "ensp/errors.hpp"
#include "ensp/parallel.hpp"
#include "ensp/spectral.hpp"
#include "ensp/stats.hpp"

namespace ensp {

namespace {

void check_cap(const ConstraintSpec& spec, int cap_n) {
    if (spec.n > cap_n || spec.n > kEnumerationCap)
        throw config_error("enumeration supports n <= " +
                           std::to_string(std::min(cap_n, kEnumerationCap)) + ", got n=" +
                           std::to_string(spec.n));
}

bool mask_in_gamma(const ConstraintSpec& spec, std::uint64_t mask,
                   const std::vector<std::uint64_t>& rows) {
    if (spec.kind == ConstraintKind::EdgeCount)
        return std::popcount(mask) == spec.edge_total;
    for (int i = 0; i < spec.n; ++i)
        if (std::popcount(mask & rows[i]) != spec.degrees[i]) return false;
    return true;
}

constexpr std::int64_t kChunk = 1 << 16;

}  // namespace

std::vector<std::uint64_t> pair_row_masks(int n) {
    std::vector<std::uint64_t> rows(n, 0ull);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const std::int64_t b = pair_index(i, j, n);
            rows[i] |= 1ull << b;
            rows[j] |= 1ull << b;
        }
    return rows;
}

std::int64_t exact_gamma_size(const ConstraintSpec& spec, int cap_n, int workers) {
    check_cap(spec, cap_n);
    spec.validate();
    const auto rows = pair_row_masks(spec.n);
    const std::int64_t total = std::int64_t{1} << pair_count(spec.n);
    const std::int64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::int64_t> partial(static_cast<std::size_t>(chunks), 0);
    parallel_for(chunks, workers, [&](std::int64_t c) {
        const std::int64_t end = std::min((c + 1) * kChunk, total);
        std::int64_t count = 0;
        for (std::int64_t mask = c * kChunk; mask < end; ++mask)
            if (mask_in_gamma(spec, static_cast<std::uint64_t>(mask), rows)) ++count;
        partial[static_cast<std::size_t>(c)] = count;
    });
    std::int64_t count = 0;
    for (auto v : partial) count += v;
    return count;
}

const std::vector<NamedFunctional>& standard_functionals() {
    static const std::vector<NamedFunctional> fns = {
        {"lambda1", [](const Graph& g) { return lambda1(g); }},
        {"lambda2", [](const Graph& g) { return g.n() >= 2 ? lambda2(g) : 0.0; }},
        {"degree_ratio",
         [](const Graph& g) { return g.edge_count() > 0 ? degree_ratio(g) : 0.0; }},
        {"edge_count", [](const Graph& g) { return static_cast<double>(g.edge_count()); }},
    };
    return fns;
}

ExactExpectation exact_expectation(const ConstraintSpec& spec, const GraphFunctional& f,
                                   int cap_n, int workers) {
    check_cap(spec, cap_n);
    const CanonicalModel model = calibrate(spec);
    const auto rows = pair_row_masks(spec.n);
    const std::int64_t total = std::int64_t{1} << pair_count(spec.n);
    const std::int64_t chunks = (total + kChunk - 1) / kChunk;

    struct Partial {
        double can_sum = 0.0, gamma_prob = 0.0, mic_sum = 0.0;
        std::int64_t gamma_count = 0;
    };
    std::vector<Partial> partial(static_cast<std::size_t>(chunks));
    parallel_for(chunks, workers, [&](std::int64_t c) {
        const std::int64_t end = std::min((c + 1) * kChunk, total);
        NeumaierSum can_sum, gamma_prob, mic_sum;
        std::int64_t gamma_count = 0;
        for (std::int64_t mask = c * kChunk; mask < end; ++mask) {
            const Graph g = Graph::from_pair_mask(spec.n, static_cast<std::uint64_t>(mask));
            const double value = f(g);
            const double prob = std::exp(model.logprob(g));
            can_sum.add(prob * value);
            if (mask_in_gamma(spec, static_cast<std::uint64_t>(mask), rows)) {
                gamma_prob.add(prob);
                mic_sum.add(value);
                ++gamma_count;
            }
        }
        partial[static_cast<std::size_t>(c)] = {can_sum.value(), gamma_prob.value(),
                                                mic_sum.value(), gamma_count};
    });

    NeumaierSum can_sum, gamma_prob, mic_sum;
    std::int64_t gamma_count = 0;
    for (const auto& p : partial) {
        can_sum.add(p.can_sum);
        gamma_prob.add(p.gamma_prob);
        mic_sum.add(p.mic_sum);
        gamma_count += p.gamma_count;
    }
    if (gamma_count == 0) throw config_error("constraint has no realizations");
    ExactExpectation out;
    out.gamma_size = gamma_count;
    out.p_can_gamma = gamma_prob.value();
    out.mic_value = mic_sum.value() / static_cast<double>(gamma_count);
    out.can_value = can_sum.value();
    return out;
}

EnsembleTable build_ensemble_table(const ConstraintSpec& spec, int cap_n, int workers) {
    EnsembleTable table;
    table.spec = spec;
    for (const auto& nf : standard_functionals()) {
        const ExactExpectation e = exact_expectation(spec, nf.fn, cap_n, workers);
        table.gamma_size = e.gamma_size;
        table.p_can_gamma = e.p_can_gamma;
        table.functional_names.push_back(nf.name);
        table.mic_values.push_back(e.mic_value);
        table.can_values.push_back(e.can_value);
    }
    return table;
}

double transfer_identity_check(const ConstraintSpec& spec, const GraphPredicate& event,
                               int cap_n) {
    check_cap(spec, cap_n);
    const CanonicalModel model = calibrate(spec);
    const auto rows = pair_row_masks(spec.n);
    const std::int64_t total = std::int64_t{1} << pair_count(spec.n);
    NeumaierSum gamma_prob, event_prob;
    std::int64_t gamma_count = 0, event_count = 0;
    for (std::int64_t mask = 0; mask < total; ++mask) {
        if (!mask_in_gamma(spec, static_cast<std::uint64_t>(mask), rows)) continue;
        const Graph g = Graph::from_pair_mask(spec.n, static_cast<std::uint64_t>(mask));
        const double prob = std::exp(model.logprob(g));
        gamma_prob.add(prob);
        ++gamma_count;
        if (event(g)) {
            event_prob.add(prob);
            ++event_count;
        }
    }
    if (gamma_count == 0) throw config_error("constraint has no realizations");
    const double mic = static_cast<double>(event_count) / static_cast<double>(gamma_count);
    const double can_ratio = event_prob.value() / gamma_prob.value();
    return std::abs(mic - can_ratio);
}

double total_probability(const ConstraintSpec& spec, int cap_n, int workers) {
    check_cap(spec, cap_n);
    const CanonicalModel model = calibrate(spec);
    const std::int64_t total = std::int64_t{1} << pair_count(spec.n);
    return chunked_sum(total, workers, kChunk, [&](std::int64_t mask) {
        const Graph g = Graph::from_pair_mask(spec.n, static_cast<std::uint64_t>(mask));
        return std::exp(model.logprob(g));
    });
}

}  // namespace ensp
