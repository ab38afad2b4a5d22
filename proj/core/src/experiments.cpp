#include "ensp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ensp/canonical.hpp"
#include "ensp/entropy.hpp"
#include "ensp/errors.hpp"
#include "ensp/graph.hpp"
#include "ensp/hash.hpp"
#include "ensp/parallel.hpp"
#include "ensp/rng.hpp"
#include "ensp/spectral.hpp"
#include "ensp/stats.hpp"

namespace ensp {

namespace {

const char* kind_name(ConstraintKind kind) {
    return kind == ConstraintKind::EdgeCount ? "edge_count" : "degree_sequence";
}

ConstraintKind kind_from_name(const std::string& name) {
    if (name == "degree_sequence") return ConstraintKind::DegreeSequence;
    if (name == "edge_count") return ConstraintKind::EdgeCount;
    throw config_error("unknown constraint kind: " + name);
}

const char* method_name(MicMethod method) {
    switch (method) {
        case MicMethod::EdgeSwapMcmc: return "edge_swap_mcmc";
        case MicMethod::PairingRejection: return "pairing_rejection";
        case MicMethod::UniformEdgeSubset: return "uniform_edge_subset";
        default: return "auto";
    }
}

MicMethod method_from_name(const std::string& name) {
    if (name == "auto") return MicMethod::Auto;
    if (name == "edge_swap_mcmc") return MicMethod::EdgeSwapMcmc;
    if (name == "pairing_rejection") return MicMethod::PairingRejection;
    if (name == "uniform_edge_subset") return MicMethod::UniformEdgeSubset;
    throw config_error("unknown sampler method: " + name);
}

const std::vector<std::string> kKnownEstimators = {"lambda1", "degree_ratio",
                                                   "expansion_k3"};

void check_config(const ExperimentConfig& cfg) {
    if (cfg.n_list.empty()) throw config_error("n_list must not be empty");
    for (int n : cfg.n_list) {
        if (n < 2) throw config_error("experiment sizes must have n >= 2");
        double p = cfg.density_at(n);
        if (!(p > 0.0 && p < 1.0))
            throw config_error("density must lie strictly between 0 and 1");
    }
    if (cfg.samples_per_n < 2) throw config_error("samples_per_n must be at least 2");
    if (!(cfg.tol > 0.0)) throw config_error("tol must be positive");
    if (cfg.lambda2_max_iter < 1)
        throw config_error("lambda2_max_iter must be at least 1");
    if (cfg.estimators.empty()) throw config_error("estimator list must not be empty");
    for (const auto& name : cfg.estimators) {
        if (std::find(kKnownEstimators.begin(), kKnownEstimators.end(), name) ==
            kKnownEstimators.end())
            throw config_error("unknown estimator: " + name);
    }
}

// Seed stream index for sample i of lane (0 canonical, 1 microcanonical) at
// position ni in the n scan.  Disjoint across the whole campaign and
// independent of worker count.
std::uint64_t stream_base(const ExperimentConfig& cfg, int ni, int lane) {
    return (static_cast<std::uint64_t>(2 * ni + lane)) *
           static_cast<std::uint64_t>(cfg.samples_per_n);
}

template <class PerGraph>
void canonical_samples(const ExperimentConfig& cfg, const CanonicalModel& model,
                       int ni, PerGraph&& per_graph) {
    std::uint64_t base = stream_base(cfg, ni, 0);
    parallel_for(cfg.samples_per_n, cfg.workers, [&](std::int64_t i) {
        Rng rng = make_rng(derive_seed(cfg.seed, base + static_cast<std::uint64_t>(i)));
        Graph g = sample_canonical(model, rng);
        per_graph(static_cast<int>(i), g);
    });
}

template <class PerGraph>
void mic_samples(const ExperimentConfig& cfg, const ConstraintSpec& spec, int ni,
                 PerGraph&& per_graph) {
    std::uint64_t base = stream_base(cfg, ni, 1);
    if (spec.kind == ConstraintKind::EdgeCount) {
        parallel_for(cfg.samples_per_n, cfg.workers, [&](std::int64_t i) {
            Graph g = sample_mic_edge_count(
                spec.n, spec.edge_total,
                derive_seed(cfg.seed, base + static_cast<std::uint64_t>(i)));
            per_graph(static_cast<int>(i), g);
        });
        return;
    }
    // Markov chain state is sequential by nature; one stream per n.
    DegreeSampler sampler(spec, cfg.mic, derive_seed(cfg.seed, base));
    for (int i = 0; i < cfg.samples_per_n; ++i) per_graph(i, sampler.next());
}

double ratio_or_zero(const Graph& g) {
    return g.edge_count() > 0 ? degree_ratio(g) : 0.0;
}

// sum (K_i - theta)^2 for the realized degree vector.
double degree_fluctuation_sum(const Graph& g, double theta) {
    std::vector<int> degs = g.degrees();
    NeumaierSum sum;
    for (int k : degs) {
        double d = static_cast<double>(k) - theta;
        sum.add(d * d);
    }
    return sum.value();
}

ConcentrationRow make_row(int n, double p, std::string statistic, std::string ensemble,
                          const std::vector<double>& values, double scale,
                          double threshold) {
    ConcentrationRow row;
    row.n = n;
    row.p = p;
    row.statistic = std::move(statistic);
    row.ensemble = std::move(ensemble);
    row.samples = static_cast<std::int64_t>(values.size());
    row.q90 = quantile(values, 0.90);
    row.q99 = quantile(values, 0.99);
    row.q999 = quantile(values, 0.999);
    row.scale = scale;
    row.q99_over_scale = scale > 0.0 ? row.q99 / scale : 0.0;
    row.threshold = threshold;
    row.exceed_count = static_cast<std::int64_t>(
        std::count_if(values.begin(), values.end(),
                      [threshold](double v) { return v > threshold; }));
    row.exceed_upper = row.exceed_count > 0
                           ? static_cast<double>(row.exceed_count) / row.samples
                           : zero_hit_upper_bound(row.samples, 0.05);
    return row;
}

// Fit log(-log f) = log nu + xi log log n over the canonical rows of one
// statistic, where f is the exceedance frequency (zero hits fall back to the
// reported upper bound, which the note records).
TailFit fit_tail(const std::string& statistic,
                 const std::vector<const ConcentrationRow*>& rows) {
    TailFit fit;
    fit.statistic = statistic;
    std::vector<double> xs, ys;
    std::string note;
    for (const ConcentrationRow* row : rows) {
        double f = row->exceed_upper;
        if (row->exceed_count == 0) {
            note += (note.empty() ? "" : "; ");
            note += "zero-hit bound substituted at n=" + std::to_string(row->n);
        }
        if (!(f > 0.0 && f < 1.0) || row->n < 3) continue;
        xs.push_back(std::log(std::log(static_cast<double>(row->n))));
        ys.push_back(std::log(-std::log(f)));
    }
    if (xs.size() < 2) {
        fit.note = note.empty() ? "insufficient points" : note + "; insufficient points";
        return fit;
    }
    LineFit line = fit_line(xs, ys);
    fit.xi = line.slope;
    fit.nu = std::exp(line.intercept);
    fit.r2 = line.r2;
    fit.ok = line.ok;
    fit.note = note;
    return fit;
}

void append_tail_fits(ConcentrationReport& report) {
    std::vector<std::string> seen;
    for (const ConcentrationRow& row : report.rows) {
        if (row.ensemble != "canonical") continue;
        if (std::find(seen.begin(), seen.end(), row.statistic) != seen.end()) continue;
        seen.push_back(row.statistic);
    }
    for (const std::string& statistic : seen) {
        std::vector<const ConcentrationRow*> rows;
        for (const ConcentrationRow& row : report.rows)
            if (row.ensemble == "canonical" && row.statistic == statistic)
                rows.push_back(&row);
        report.fits.push_back(fit_tail(statistic, rows));
    }
}

}  // namespace

double ExperimentConfig::density_at(int n) const {
    if (ultra_dense) return 1.0 - 1.0 / std::sqrt(static_cast<double>(n));
    return density;
}

ConstraintSpec ExperimentConfig::spec_at(int n) const {
    if (kind == ConstraintKind::EdgeCount)
        return ConstraintSpec::rounded_edge_count(n, density_at(n));
    return ConstraintSpec::rounded_regular(n, density_at(n));
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["kind"] = kind_name(cfg.kind);
    j["density"] = cfg.density;
    j["ultra_dense"] = cfg.ultra_dense;
    j["n_list"] = cfg.n_list;
    j["samples_per_n"] = cfg.samples_per_n;
    j["seed"] = cfg.seed;
    j["estimators"] = cfg.estimators;
    j["regime_beta"] = cfg.regime_beta;
    j["workers"] = cfg.workers;
    j["tol"] = cfg.tol;
    j["lambda2_max_iter"] = cfg.lambda2_max_iter;
    j["mic"] = {{"method", method_name(cfg.mic.method)},
                {"burn_in_swaps", cfg.mic.burn_in_swaps},
                {"thinning_swaps", cfg.mic.thinning_swaps},
                {"max_rejections", cfg.mic.max_rejections}};
    return j.dump(2);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config parse: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        cfg.kind = kind_from_name(j.value("kind", std::string(kind_name(cfg.kind))));
        cfg.density = j.value("density", cfg.density);
        cfg.ultra_dense = j.value("ultra_dense", cfg.ultra_dense);
        cfg.n_list = j.value("n_list", cfg.n_list);
        cfg.samples_per_n = j.value("samples_per_n", cfg.samples_per_n);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.estimators = j.value("estimators", cfg.estimators);
        cfg.regime_beta = j.value("regime_beta", cfg.regime_beta);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.tol = j.value("tol", cfg.tol);
        cfg.lambda2_max_iter = j.value("lambda2_max_iter", cfg.lambda2_max_iter);
        if (j.contains("mic")) {
            const nlohmann::json& m = j.at("mic");
            cfg.mic.method = method_from_name(
                m.value("method", std::string(method_name(cfg.mic.method))));
            cfg.mic.burn_in_swaps = m.value("burn_in_swaps", cfg.mic.burn_in_swaps);
            cfg.mic.thinning_swaps = m.value("thinning_swaps", cfg.mic.thinning_swaps);
            cfg.mic.max_rejections = m.value("max_rejections", cfg.mic.max_rejections);
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config fields: ") + e.what());
    }
    check_config(cfg);
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return experiment_config_from_json(buffer.str());
}

std::string experiment_config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig keyed = cfg;
    keyed.seed = 0;
    keyed.workers = 0;
    return hex16(fnv1a64(experiment_config_to_json(keyed)));
}

DeltaReport delta_experiment(const ExperimentConfig& cfg) {
    check_config(cfg);
    DeltaReport report;
    report.config = cfg;
    SpectralOptions sopt{cfg.tol, 100000};
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        ConstraintSpec spec = cfg.spec_at(n);
        CanonicalModel model = calibrate(spec);

        std::vector<double> can(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            can[i] = lambda1_full(g, sopt).value;
        });
        MeanStderr cs = mean_stderr(can);

        DeltaRow row;
        row.n = n;
        row.p = model.p();
        row.can_mean = cs.mean;
        row.can_stderr = cs.stderr_value;
        row.can_variance = cs.sample_variance;
        if (spec.is_constant_degree()) {
            // Every realization is d-regular, so lambda1 equals d exactly.
            row.mic_mean = static_cast<double>(spec.degrees.front());
            row.mic_stderr = 0.0;
            row.mic_exact = true;
        } else {
            std::vector<double> mic(cfg.samples_per_n, 0.0);
            mic_samples(cfg, spec, ni, [&](int i, const Graph& g) {
                mic[i] = lambda1_full(g, sopt).value;
            });
            MeanStderr ms = mean_stderr(mic);
            row.mic_mean = ms.mean;
            row.mic_stderr = ms.stderr_value;
            row.mic_exact = false;
        }
        row.delta = row.can_mean - row.mic_mean;
        row.delta_stderr = std::sqrt(row.can_stderr * row.can_stderr +
                                     row.mic_stderr * row.mic_stderr);
        FkPrediction fk = fk_prediction(n, row.p, cfg.regime_beta);
        row.fk = fk.value;
        row.fk_error_scale = fk.error_scale;
        row.regime_ok = fk.regime_ok;
        report.rows.push_back(std::move(row));
    }
    return report;
}

VarianceReport variance_check(const ExperimentConfig& cfg) {
    check_config(cfg);
    VarianceReport report;
    report.config = cfg;
    SpectralOptions sopt{cfg.tol, 100000};
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        CanonicalModel model = calibrate(cfg.spec_at(n));
        double p = model.p();

        std::vector<double> lam(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            lam[i] = lambda1_full(g, sopt).value;
        });
        MeanStderr ms = mean_stderr(lam);
        Interval ci = variance_interval(ms.sample_variance, ms.count, 0.05);

        VarianceRow row;
        row.n = n;
        row.p = p;
        row.variance = ms.sample_variance;
        row.variance_lo = ci.lo;
        row.variance_hi = ci.hi;
        row.target_variance = 2.0 * p * (1.0 - p);
        row.mean_shift = ms.mean - static_cast<double>(n - 1) * p;
        row.shift_stderr = ms.stderr_value;
        row.target_shift = 1.0 - p;
        report.rows.push_back(row);
    }
    return report;
}

ConcentrationReport degree_concentration_stat(const ExperimentConfig& cfg) {
    check_config(cfg);
    ConcentrationReport report;
    report.config = cfg;
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        CanonicalModel model = calibrate(cfg.spec_at(n));
        double p = model.p();
        double s2 = model.sigma2();
        double theta = static_cast<double>(n - 1) * p;
        double dn = static_cast<double>(n);

        std::vector<double> around_mean(cfg.samples_per_n, 0.0);
        std::vector<double> around_n2(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            double total = degree_fluctuation_sum(g, theta);
            around_mean[i] = std::abs(total - s2 * dn * (dn - 1.0));
            around_n2[i] = std::abs(total - s2 * dn * dn);
        });

        report.rows.push_back(make_row(n, p, "degree_fluctuation", "canonical",
                                       around_mean, std::pow(dn, 1.5),
                                       s2 * std::pow(dn, 1.5) * std::log(dn)));
        report.rows.push_back(make_row(n, p, "degree_fluctuation_centered", "canonical",
                                       around_n2, dn * dn, 2.0 * s2 * dn * dn));
    }
    append_tail_fits(report);
    return report;
}

ConcentrationReport ratio_concentration(const ExperimentConfig& cfg) {
    check_config(cfg);
    ConcentrationReport report;
    report.config = cfg;
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        ConstraintSpec spec = cfg.spec_at(n);
        CanonicalModel model = calibrate(spec);
        double p = model.p();
        double mu = model.mu();
        double s2 = model.sigma2();
        if (!(mu > 0.0)) throw config_error("ratio statistics need positive density");
        double bias = s2 / mu;
        double pairs = 0.5 * static_cast<double>(n) * (n - 1);
        double sqrt_n = std::sqrt(static_cast<double>(n));

        auto eval = [&](const Graph& g, double& gap, double& hoeff) {
            double mean_deg = 2.0 * static_cast<double>(g.edge_count()) / n;
            gap = sqrt_n * std::abs(ratio_or_zero(g) - mean_deg - bias);
            hoeff = std::abs(static_cast<double>(g.edge_count()) - pairs * mu) / n;
        };

        std::vector<double> can_gap(cfg.samples_per_n, 0.0);
        std::vector<double> can_hoeff(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            eval(g, can_gap[i], can_hoeff[i]);
        });

        std::vector<double> mic_gap(cfg.samples_per_n, 0.0);
        std::vector<double> mic_hoeff(cfg.samples_per_n, 0.0);
        mic_samples(cfg, spec, ni, [&](int i, const Graph& g) {
            eval(g, mic_gap[i], mic_hoeff[i]);
        });

        double gap_threshold = 9.0 * s2;
        double hoeff_threshold = std::sqrt(0.5 * std::log(static_cast<double>(n)));
        report.rows.push_back(
            make_row(n, p, "ratio_gap", "canonical", can_gap, 1.0, gap_threshold));
        report.rows.push_back(make_row(n, p, "edge_sum_hoeffding", "canonical",
                                       can_hoeff, 1.0, hoeff_threshold));
        report.rows.push_back(
            make_row(n, p, "ratio_gap", "microcanonical", mic_gap, 1.0, gap_threshold));
        report.rows.push_back(make_row(n, p, "edge_sum_hoeffding", "microcanonical",
                                       mic_hoeff, 1.0, hoeff_threshold));
    }
    append_tail_fits(report);
    return report;
}

ConcentrationReport lambda_ratio_gap(const ExperimentConfig& cfg) {
    check_config(cfg);
    ConcentrationReport report;
    report.config = cfg;
    SpectralOptions top_opt{cfg.tol, 100000};
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        CanonicalModel model = calibrate(cfg.spec_at(n));
        double p = model.p();
        double mu = model.mu();
        double s2 = model.sigma2();
        if (!(mu > 0.0)) throw config_error("ratio statistics need positive density");
        double sigma = std::sqrt(s2);
        double sqrt_n = std::sqrt(static_cast<double>(n));
        SpectralOptions l2_opt{cfg.tol, cfg.lambda2_max_iter};

        std::vector<double> gap(cfg.samples_per_n, 0.0);
        std::vector<double> second(cfg.samples_per_n, 0.0);
        std::vector<double> rnorm(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            EigenResult top = lambda1_full(g, top_opt);
            gap[i] = sqrt_n * std::abs(ratio_or_zero(g) - top.value);
            if (n >= 2) second[i] = lambda2_full(g, top, l2_opt).value;
            // ones = v1 + r with v1 along the top eigenvector, so
            // ||r||^2 = n - <ones, v>^2.
            NeumaierSum overlap;
            for (double x : top.vector) overlap.add(x);
            rnorm[i] = static_cast<double>(n) - overlap.value() * overlap.value();
        });

        report.rows.push_back(make_row(n, p, "lambda_gap", "canonical", gap, 1.0, 0.5));
        report.rows.push_back(make_row(n, p, "lambda2_beta2.5", "canonical", second,
                                       sigma * sqrt_n, 2.5 * sigma * sqrt_n));
        report.rows.push_back(make_row(n, p, "lambda2_beta3.0", "canonical", second,
                                       sigma * sqrt_n, 3.0 * sigma * sqrt_n));
        report.rows.push_back(make_row(n, p, "ones_remainder_norm2", "canonical", rnorm,
                                       s2 / (mu * mu), 4.0 * s2 / (mu * mu)));
    }
    append_tail_fits(report);
    return report;
}

TransferReport transfer_check(const ExperimentConfig& cfg, double gamma) {
    check_config(cfg);
    if (!(gamma > 0.0)) throw config_error("gamma must be positive");
    TransferReport report;
    report.config = cfg;
    report.gamma = gamma;
    for (int ni = 0; ni < static_cast<int>(cfg.n_list.size()); ++ni) {
        int n = cfg.n_list[ni];
        ConstraintSpec spec = cfg.spec_at(n);
        CanonicalModel model = calibrate(spec);
        double p = model.p();
        double mu = model.mu();
        double s2 = model.sigma2();
        if (!(mu > 0.0)) throw config_error("ratio statistics need positive density");
        double bias = s2 / mu;
        double sqrt_n = std::sqrt(static_cast<double>(n));

        std::vector<double> stat(cfg.samples_per_n, 0.0);
        canonical_samples(cfg, model, ni, [&](int i, const Graph& g) {
            double mean_deg = 2.0 * static_cast<double>(g.edge_count()) / n;
            stat[i] = sqrt_n * std::abs(ratio_or_zero(g) - mean_deg - bias);
        });

        TransferRow row;
        row.n = n;
        row.p = p;
        row.gamma = gamma;
        row.samples = cfg.samples_per_n;
        row.hits = static_cast<std::int64_t>(std::count_if(
            stat.begin(), stat.end(), [gamma](double v) { return v > gamma; }));
        row.zero_hit = row.hits == 0;
        row.p_event_compl = row.zero_hit
                                ? zero_hit_upper_bound(row.samples, 0.05)
                                : static_cast<double>(row.hits) / row.samples;
        row.s_n = spec.kind == ConstraintKind::EdgeCount
                      ? relative_entropy_edge_count(spec.n, spec.edge_total).s_n
                      : relative_entropy_enumerated(spec).s_n;
        row.exp_neg_s = std::exp(-row.s_n);
        row.ratio = row.p_event_compl / row.exp_neg_s;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace ensp
