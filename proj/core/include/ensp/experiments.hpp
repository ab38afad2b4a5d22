#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ensp/constraint.hpp"
#include "ensp/microcanonical.hpp"

namespace ensp {

// One Monte Carlo campaign: a constraint family at a density schedule,
// swept over n_list with a fixed seed.  Identical config + seed gives
// bit-identical reports.
struct ExperimentConfig {
    ConstraintKind kind = ConstraintKind::DegreeSequence;
    double density = 0.5;
    bool ultra_dense = false;  // schedule p(n) = 1 - n^{-1/2}
    std::vector<int> n_list;
    int samples_per_n = 300;
    std::uint64_t seed = 1;
    std::vector<std::string> estimators = {"lambda1"};
    double regime_beta = 2.5;  // density-window exponent, only flags validity
    int workers = 0;           // 0: machine parallelism
    double tol = 1e-10;
    int lambda2_max_iter = 200;  // iteration budget at the near-degenerate bulk edge
    MicSamplerConfig mic;

    double density_at(int n) const;
    ConstraintSpec spec_at(int n) const;  // rounded degree or edge target
};

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);
// Digest of the config with seed and workers zeroed; used in report names.
std::string experiment_config_hash(const ExperimentConfig& cfg);

// Ensemble gap in the largest eigenvalue.
struct DeltaRow {
    int n = 0;
    double p = 0.0;
    double can_mean = 0.0, can_stderr = 0.0, can_variance = 0.0;
    double mic_mean = 0.0, mic_stderr = 0.0;
    bool mic_exact = false;  // constant-degree target: exact value d, no sampling
    double delta = 0.0, delta_stderr = 0.0;
    double fk = 0.0, fk_error_scale = 0.0;
    bool regime_ok = false;
};
struct DeltaReport {
    ExperimentConfig config;
    std::vector<DeltaRow> rows;
};
DeltaReport delta_experiment(const ExperimentConfig& cfg);

// Mean shift and variance of lambda1 against the dense-regime normal law.
struct VarianceRow {
    int n = 0;
    double p = 0.0;
    double variance = 0.0, variance_lo = 0.0, variance_hi = 0.0;
    double target_variance = 0.0;  // 2p(1-p)
    double mean_shift = 0.0, shift_stderr = 0.0;
    double target_shift = 0.0;  // 1-p
};
struct VarianceReport {
    ExperimentConfig config;
    std::vector<VarianceRow> rows;
};
VarianceReport variance_check(const ExperimentConfig& cfg);

// Empirical tail behaviour of one scalar statistic at one n.
struct ConcentrationRow {
    int n = 0;
    double p = 0.0;
    std::string statistic;
    std::string ensemble;  // "canonical" or "microcanonical"
    std::int64_t samples = 0;
    double q90 = 0.0, q99 = 0.0, q999 = 0.0;
    double scale = 1.0;  // reference growth scale at this n
    double q99_over_scale = 0.0;
    double threshold = 0.0;
    std::int64_t exceed_count = 0;
    double exceed_upper = 0.0;  // one-sided bound when no exceedances occur
};
// Exponent fit of the tail model: exceedance probability exp(-nu (log n)^xi).
struct TailFit {
    std::string statistic;
    double xi = 0.0, nu = 0.0, r2 = 0.0;
    bool ok = false;
    std::string note;
};
struct ConcentrationReport {
    ExperimentConfig config;
    std::vector<ConcentrationRow> rows;
    std::vector<TailFit> fits;
};

// Degree-vector fluctuation sum(K_i - Theta)^2 around its two centerings.
ConcentrationReport degree_concentration_stat(const ExperimentConfig& cfg);
// Degree-ratio deviation and the edge-total Hoeffding statistic, under the
// canonical ensemble and replayed under the matching microcanonical one.
ConcentrationReport ratio_concentration(const ExperimentConfig& cfg);
// Degree ratio vs lambda1 gap, lambda2 magnitude events, and the norm of
// the all-ones remainder against its concentration bound.
ConcentrationReport lambda_ratio_gap(const ExperimentConfig& cfg);

// Transfer bound diagnostics: P_can of the complement of the ratio
// concentration event vs e^{-s_n}.
struct TransferRow {
    int n = 0;
    double p = 0.0;
    double gamma = 0.0;
    std::int64_t samples = 0, hits = 0;
    double p_event_compl = 0.0;  // point estimate, or upper bound when zero hits
    bool zero_hit = false;
    double s_n = 0.0;
    double exp_neg_s = 0.0;
    double ratio = 0.0;  // p_event_compl / exp(-s_n)
};
struct TransferReport {
    ExperimentConfig config;
    double gamma = 0.0;
    std::vector<TransferRow> rows;
};
TransferReport transfer_check(const ExperimentConfig& cfg, double gamma);

}  // namespace ensp
