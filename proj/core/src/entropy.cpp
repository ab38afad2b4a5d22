#include "ensp/entropy.hpp"

#include <bit>
#include <cmath>

#include "ensp/canonical.hpp"
#include "ensp/errors.hpp"
#include "ensp/stats.hpp"

namespace ensp {

EntropyReport relative_entropy_edge_count(int n, std::int64_t L) {
    const std::int64_t M = pair_count(n);
    if (L < 0 || L > M)
        throw config_error("edge count " + std::to_string(L) + " out of range [0, " +
                           std::to_string(M) + "]");
    EntropyReport rep;
    rep.spec = ConstraintSpec::edge_count(n, L);
    rep.method = EntropyMethod::ClosedForm;
    if (M <= 63) rep.gamma_size = static_cast<std::int64_t>(choose_exact(static_cast<int>(M), static_cast<int>(L)));
    rep.log_gamma_size = log_choose(M, L);
    if (L == 0 || L == M) {
        // single realization drawn with probability 1
        rep.s_n = 0.0;
        rep.p_can_gamma_log = 0.0;
        return rep;
    }
    const double p = static_cast<double>(L) / static_cast<double>(M);
    rep.p_can_gamma_log = rep.log_gamma_size + static_cast<double>(L) * std::log(p) +
                          static_cast<double>(M - L) * std::log1p(-p);
    rep.s_n = -rep.p_can_gamma_log;
    return rep;
}

EntropyReport relative_entropy_enumerated(const ConstraintSpec& spec, int cap_n) {
    if (spec.n > cap_n || spec.n > kEnumerationCap)
        throw config_error("enumerated entropy supports n <= " +
                           std::to_string(std::min(cap_n, kEnumerationCap)));
    if (!is_graphical(spec)) throw config_error("constraint is not graphical");
    const CanonicalModel model = calibrate(spec);
    const auto rows = pair_row_masks(spec.n);
    const std::int64_t total = std::int64_t{1} << pair_count(spec.n);

    EntropyReport rep;
    rep.spec = spec;
    rep.method = EntropyMethod::Enumeration;
    std::int64_t count = 0;
    NeumaierSum prob_sum;
    double rep_logprob = 0.0;
    const bool sum_probs = pair_count(spec.n) <= 21;  // n=8 uses the constancy shortcut
    for (std::int64_t mask = 0; mask < total; ++mask) {
        const auto m = static_cast<std::uint64_t>(mask);
        bool member;
        if (spec.kind == ConstraintKind::EdgeCount) {
            member = std::popcount(m) == spec.edge_total;
        } else {
            member = true;
            for (int i = 0; i < spec.n && member; ++i)
                member = std::popcount(m & rows[i]) == spec.degrees[i];
        }
        if (!member) continue;
        if (count == 0 || sum_probs) {
            const Graph g = Graph::from_pair_mask(spec.n, m);
            const double lp = model.logprob(g);
            if (count == 0) rep_logprob = lp;
            if (sum_probs) prob_sum.add(std::exp(lp));
        }
        ++count;
    }
    if (count == 0) throw config_error("constraint has no realizations");
    rep.gamma_size = count;
    rep.log_gamma_size = std::log(static_cast<double>(count));
    rep.p_can_gamma_log = sum_probs ? std::log(prob_sum.value())
                                    : rep.log_gamma_size + rep_logprob;
    rep.s_n = rep.p_can_gamma_log == 0.0 ? 0.0 : -rep.p_can_gamma_log;
    return rep;
}

std::vector<EntropyScanRow> entropy_scaling_scan(ConstraintKind kind,
                                                 const std::vector<int>& n_list,
                                                 double density) {
    std::vector<EntropyScanRow> rows;
    rows.reserve(n_list.size());
    for (int n : n_list) {
        EntropyReport rep;
        if (kind == ConstraintKind::EdgeCount) {
            const ConstraintSpec spec = ConstraintSpec::rounded_edge_count(n, density);
            rep = relative_entropy_edge_count(n, spec.edge_total);
        } else {
            rep = relative_entropy_enumerated(ConstraintSpec::rounded_regular(n, density));
        }
        EntropyScanRow row;
        row.n = n;
        row.s_n = rep.s_n;
        row.s_minus_log_n = rep.s_n - std::log(static_cast<double>(n));
        row.s_over_nlogn =
            n >= 2 ? rep.s_n / (static_cast<double>(n) * std::log(static_cast<double>(n)))
                   : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ensp
