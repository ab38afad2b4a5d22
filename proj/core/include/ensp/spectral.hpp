#pragma once

#include <vector>

#include "ensp/graph.hpp"

namespace ensp {

struct SpectralOptions {
    double tol = 1e-10;
    int max_iter = 100000;
};

struct EigenResult {
    double value = 0.0;
    std::vector<double> vector;
    int iterations = 0;
    double residual = 0.0;  // final Rayleigh residual norm
    bool converged = false;
};

// Largest adjacency eigenvalue by power iteration on A + cI with shift
// c = max degree.  Deterministic start vector; convergence when
// ||Ax - lambda x|| <= tol * max(1, |lambda|).  On iteration exhaustion the
// best estimate is returned with converged = false.
EigenResult lambda1_full(const Graph& g, const SpectralOptions& opt = SpectralOptions{});

// Second-largest eigenvalue via deflation of the shifted matrix by the
// converged top eigenvector.
EigenResult lambda2_full(const Graph& g, const EigenResult& top,
                         const SpectralOptions& opt = SpectralOptions{});

double lambda1(const Graph& g, double tol = 1e-10);
double lambda2(const Graph& g, double tol = 1e-10);

// sum K_i^2 / sum K_i; throws config_error on an edgeless graph.
double degree_ratio(const Graph& g);

struct FkPrediction {
    double value = 0.0;        // (n-1)p + (1-p)
    double error_scale = 0.0;  // (1-p)^{3/2} / (q sqrt((n-1)p))
    bool regime_ok = false;    // density window n^{-1}(log n)^beta <= p < 1 - n^{-1}(log n)^beta
};
FkPrediction fk_prediction(int n, double p, double regime_beta = 2.5);

struct SpectralSummary {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double degree_ratio = 0.0;  // 0 on an edgeless graph
    double fk_prediction = 0.0;
    double residual = 0.0;  // degree_ratio - lambda1
    int iterations = 0;
    double tol_achieved = 0.0;
};
SpectralSummary spectral_summary(const Graph& g, double p,
                                 const SpectralOptions& opt = SpectralOptions{});

// Split of the all-ones vector against the top eigenvector: ones = v1 + r
// with <v1, r> = 0, and the correction term that closes the gap between the
// degree ratio and lambda1:
//   degree_ratio = lambda1 + (||Ar||^2 - lambda1 <r, Ar>) / sum K_i.
struct ResidualDecomposition {
    std::vector<double> v1;
    std::vector<double> r;
    double r_norm2 = 0.0;
    double ar_norm2 = 0.0;
    double cross = 0.0;  // <r, Ar>
    double lambda1 = 0.0;
    double residual = 0.0;
};
ResidualDecomposition residual_decomposition(
    const Graph& g, const SpectralOptions& opt = SpectralOptions{1e-12, 100000});

// Truncated moment-series estimate of lambda1 around the dense mean-field
// value, using moments <e, T^k e> of the centered rescaled matrix
// T = (A + pI - pJ) / sqrt(np(1-p)) with e the normalized all-ones vector.
// k_max in {0,1,2,3} selects the partial sum; the result is rescaled by
// sqrt(np(1-p)) and shifted by -p back to the zero-diagonal matrix.
double expansion_estimate(const Graph& g, double p, int k_max);

}  // namespace ensp
