#include "ensp/canonical.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>

#include "ensp/errors.hpp"
#include "ensp/stats.hpp"

namespace ensp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Iteratively removes vertices whose remaining target degree is 0 (all
// remaining pairs absent) or active_count-1 (all remaining pairs present).
// Records removal order so pair states can be reconstructed.
void peel_boundary(const std::vector<int>& target, std::vector<int>& rank,
                   std::vector<signed char>& type, std::vector<int>& residual_degree) {
    const int n = static_cast<int>(target.size());
    rank.assign(n, INT_MAX);
    type.assign(n, 0);
    residual_degree = target;
    int active = n;
    int next_rank = 0;
    bool changed = true;
    while (changed && active > 0) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (rank[i] != INT_MAX) continue;
            if (residual_degree[i] == 0) {
                rank[i] = next_rank++;
                type[i] = -1;
                --active;
                changed = true;
            } else if (residual_degree[i] == active - 1) {
                rank[i] = next_rank++;
                type[i] = +1;
                --active;
                for (int j = 0; j < n; ++j)
                    if (j != i && rank[j] == INT_MAX) --residual_degree[j];
                changed = true;
            }
        }
    }
}

}  // namespace

double CanonicalModel::pair_prob(int i, int j) const {
    if (homogeneous_) return p_;
    const int ri = peel_rank_[i], rj = peel_rank_[j];
    if (ri == INT_MAX && rj == INT_MAX) {
        const double xij = x_[i] * x_[j];
        return xij / (1.0 + xij);
    }
    const int first = (ri < rj) ? i : j;
    return peel_type_[first] > 0 ? 1.0 : 0.0;
}

double CanonicalModel::logprob(const Graph& g) const {
    if (g.n() != n())
        throw config_error("graph has n=" + std::to_string(g.n()) +
                           ", model expects n=" + std::to_string(n()));
    const std::int64_t M = pair_count(n());
    if (homogeneous_) {
        const std::int64_t L = g.edge_count();
        if (p_ == 0.0) return L == 0 ? 0.0 : -kInf;
        if (p_ == 1.0) return L == M ? 0.0 : -kInf;
        return static_cast<double>(L) * std::log(p_) +
               static_cast<double>(M - L) * std::log1p(-p_);
    }
    NeumaierSum s;
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j) {
            const double p = pair_prob(i, j);
            const bool edge = g.has_edge(i, j);
            if (p == 0.0) {
                if (edge) return -kInf;
            } else if (p == 1.0) {
                if (!edge) return -kInf;
            } else {
                s.add(edge ? std::log(p) : std::log1p(-p));
            }
        }
    return s.value();
}

std::vector<double> CanonicalModel::expected_degrees() const {
    std::vector<double> out(n(), 0.0);
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j) {
            const double p = pair_prob(i, j);
            out[i] += p;
            out[j] += p;
        }
    return out;
}

CanonicalModel calibrate(const ConstraintSpec& spec) {
    spec.validate();
    if (!is_graphical(spec)) throw config_error("constraint is not graphical");

    CanonicalModel m;
    m.spec_ = spec;
    const int n = spec.n;
    const std::int64_t M = pair_count(n);

    if (spec.kind == ConstraintKind::EdgeCount) {
        m.homogeneous_ = true;
        m.p_ = (M > 0) ? static_cast<double>(spec.edge_total) / static_cast<double>(M) : 0.0;
        if (m.p_ <= 0.0)
            m.theta_ = {kInf};
        else if (m.p_ >= 1.0)
            m.theta_ = {-kInf};
        else
            m.theta_ = {std::log((1.0 - m.p_) / m.p_)};
        m.mu_ = m.p_;
        m.sigma2_ = m.p_ * (1.0 - m.p_);
        m.residual_ = 0.0;
        return m;
    }

    if (spec.is_constant_degree() && n >= 2) {
        const int d = spec.degrees.empty() ? 0 : spec.degrees[0];
        m.homogeneous_ = true;
        m.p_ = static_cast<double>(d) / static_cast<double>(n - 1);
        double th;
        if (m.p_ <= 0.0)
            th = kInf;
        else if (m.p_ >= 1.0)
            th = -kInf;
        else
            th = 0.5 * std::log((1.0 - m.p_) / m.p_);
        m.theta_.assign(n, th);
        m.mu_ = m.p_;
        m.sigma2_ = m.p_ * (1.0 - m.p_);
        m.residual_ = 0.0;
        return m;
    }

    // General degree sequence: peel boundary vertices, then solve the
    // fixed point x_i = k_i / sum_{j != i} x_j / (1 + x_i x_j) on the rest.
    m.homogeneous_ = false;
    std::vector<int> residual_degree;
    peel_boundary(spec.degrees, m.peel_rank_, m.peel_type_, residual_degree);

    std::vector<int> active;
    for (int i = 0; i < n; ++i)
        if (m.peel_rank_[i] == INT_MAX) active.push_back(i);

    m.x_.assign(n, 0.0);
    if (!active.empty()) {
        double ksum = 0.0;
        for (int i : active) ksum += residual_degree[i];
        for (int i : active)
            m.x_[i] = residual_degree[i] / std::sqrt(ksum);

        const double tol = 1e-10;
        const int max_iter = 100000;
        auto max_residual = [&]() {
            double residual = 0.0;
            for (int i : active) {
                double expected = 0.0;
                for (int j : active) {
                    if (j == i) continue;
                    const double xij = m.x_[i] * m.x_[j];
                    expected += xij / (1.0 + xij);
                }
                residual = std::max(residual, std::abs(expected - residual_degree[i]));
            }
            return residual;
        };
        // Sweeps update in place; the simultaneous update can lock into a
        // two-cycle on some sequences.
        double residual = max_residual();
        int it = 0;
        for (; it < max_iter && residual > tol; ++it) {
            double xmax = 0.0;
            for (int i : active) {
                double denom = 0.0;
                for (int j : active) {
                    if (j == i) continue;
                    denom += m.x_[j] / (1.0 + m.x_[i] * m.x_[j]);
                }
                m.x_[i] = residual_degree[i] / denom;
                xmax = std::max(xmax, m.x_[i]);
            }
            residual = max_residual();
            if (xmax > 1e12)
                throw convergence_error(
                    "degree calibration diverged; sequence sits on the "
                    "realizability boundary and forces some pair states",
                    residual);
        }
        m.iterations_ = it;
        m.residual_ = residual;
        if (residual > tol)
            throw convergence_error(
                "degree calibration stalled after " + std::to_string(max_iter) +
                    " sweeps; sequence may sit on the realizability boundary",
                residual);
    }

    m.theta_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (m.peel_rank_[i] != INT_MAX)
            m.theta_[i] = m.peel_type_[i] > 0 ? -kInf : kInf;
        else
            m.theta_[i] = -std::log(m.x_[i]);
    }

    NeumaierSum psum, vsum;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double p = m.pair_prob(i, j);
            psum.add(p);
            vsum.add(p * (1.0 - p));
        }
    m.mu_ = (M > 0) ? psum.value() / static_cast<double>(M) : 0.0;
    m.sigma2_ = (M > 0) ? vsum.value() / static_cast<double>(M) : 0.0;
    return m;
}

Graph sample_canonical(const CanonicalModel& model, Rng& rng) {
    const int n = model.n();
    PairBits b(n);
    if (model.homogeneous()) {
        const double p = model.p();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (bernoulli(rng, p)) b.set(i, j);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (bernoulli(rng, model.pair_prob(i, j))) b.set(i, j);
    }
    return Graph(std::move(b));
}

Graph sample_canonical(const CanonicalModel& model, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return sample_canonical(model, rng);
}

double canonical_logprob(const CanonicalModel& model, const Graph& g) {
    return model.logprob(g);
}

}  // namespace ensp
