#pragma once

#include <cstdint>
#include <vector>

#include "ensp/constraint.hpp"
#include "ensp/graph.hpp"
#include "ensp/rng.hpp"

namespace ensp {

// Maximum-entropy independent-edge model whose expected constraint equals
// the target.  Homogeneous targets (edge count, constant degree) reduce to a
// single retention probability; general degree sequences carry per-vertex
// fugacities x_i with p_ij = x_i x_j / (1 + x_i x_j).  Vertices whose target
// degree is 0 or n-1 are peeled off first and their incident pairs forced,
// since the multiplier diverges there.
class CanonicalModel {
public:
    const ConstraintSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    bool homogeneous() const { return homogeneous_; }
    double p() const { return p_; }
    double pair_prob(int i, int j) const;
    const std::vector<double>& theta() const { return theta_; }
    double mu() const { return mu_; }
    double sigma2() const { return sigma2_; }
    double calibration_residual() const { return residual_; }
    int iterations() const { return iterations_; }

    double logprob(const Graph& g) const;
    std::vector<double> expected_degrees() const;

private:
    friend CanonicalModel calibrate(const ConstraintSpec& spec);
    CanonicalModel() = default;

    ConstraintSpec spec_;
    bool homogeneous_ = true;
    double p_ = 0.0;                    // homogeneous retention probability
    std::vector<double> x_;             // fugacities, active vertices only
    std::vector<double> theta_;         // multipliers; +-inf on forced vertices
    std::vector<int> peel_rank_;        // forced-removal order, INT_MAX if active
    std::vector<signed char> peel_type_;  // +1 forced-full, -1 forced-isolated, 0 active
    double mu_ = 0.0;
    double sigma2_ = 0.0;
    double residual_ = 0.0;
    int iterations_ = 0;
};

// Solves for the model parameters; throws config_error on a non-graphical
// target and convergence_error when the fixed point stalls.
CanonicalModel calibrate(const ConstraintSpec& spec);

// One independent-trial draw; pairs are visited in row-major order, one
// uniform variate per pair.
Graph sample_canonical(const CanonicalModel& model, Rng& rng);
Graph sample_canonical(const CanonicalModel& model, std::uint64_t seed);

double canonical_logprob(const CanonicalModel& model, const Graph& g);

}  // namespace ensp
