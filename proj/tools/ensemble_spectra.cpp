#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ensp/canonical.hpp"
#include "ensp/constraint.hpp"
#include "ensp/entropy.hpp"
#include "ensp/enumeration.hpp"
#include "ensp/errors.hpp"
#include "ensp/experiments.hpp"
#include "ensp/graph.hpp"
#include "ensp/hash.hpp"
#include "ensp/microcanonical.hpp"
#include "ensp/report_io.hpp"
#include "ensp/rng.hpp"
#include "ensp/spectral.hpp"

namespace {

using namespace ensp;

// Constraint selection shared by several subcommands: either a JSON file or
// the (--kind, --n, ...) flag family.
struct ConstraintFlags {
    std::string file;
    std::string kind = "edge_count";
    int n = 0;
    double density = -1.0;
    int d = -1;
    std::int64_t L = -1;
};

void add_constraint_flags(CLI::App* cmd, ConstraintFlags& f) {
    cmd->add_option("--constraint", f.file, "Constraint spec JSON file");
    cmd->add_option("--kind", f.kind, "Constraint kind: degree_sequence or edge_count");
    cmd->add_option("--n", f.n, "Vertex count");
    cmd->add_option("--p", f.density, "Density in (0,1); rounded to the nearest target");
    cmd->add_option("--d", f.d, "Common degree (degree_sequence kind)");
    cmd->add_option("--L", f.L, "Edge total (edge_count kind)");
}

ConstraintSpec make_constraint(const ConstraintFlags& f) {
    if (!f.file.empty()) return load_constraint_file(f.file);
    if (f.n <= 0) throw config_error("need --constraint, or --n with a target flag");
    if (f.kind == "edge_count") {
        if (f.L >= 0) return ConstraintSpec::edge_count(f.n, f.L);
        if (f.density >= 0.0) return ConstraintSpec::rounded_edge_count(f.n, f.density);
        throw config_error("edge_count kind needs --L or --p");
    }
    if (f.kind == "degree_sequence") {
        if (f.d >= 0) return ConstraintSpec::regular(f.n, f.d);
        if (f.density >= 0.0) return ConstraintSpec::rounded_regular(f.n, f.density);
        throw config_error("degree_sequence kind needs --d or --p");
    }
    throw config_error("unknown constraint kind: " + f.kind);
}

// Experiment campaign selection: a JSON config file plus flag overrides.
struct ExperimentFlags {
    std::string config_path;
    std::string kind;
    std::vector<int> n_list;
    int n = 0;
    double density = -1.0;
    bool ultra_dense = false;
    int samples = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
    cmd->add_option("--config", f.config_path, "Experiment config JSON file");
    cmd->add_option("--kind", f.kind, "Constraint kind: degree_sequence or edge_count");
    cmd->add_option("--n-list", f.n_list, "Sizes to scan")->delimiter(',');
    cmd->add_option("--n", f.n, "Single size (replaces n_list)");
    cmd->add_option("--p", f.density, "Density in (0,1)");
    cmd->add_flag("--ultra-dense", f.ultra_dense, "Use the schedule p(n) = 1 - n^{-1/2}");
    cmd->add_option("--samples", f.samples, "Samples per size");
    cmd->add_option("--seed", f.seed, "Root RNG seed")->each([&f](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_option("--workers", f.workers, "Worker threads (0: machine parallelism)");
}

ExperimentConfig make_experiment_config(const ExperimentFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) cfg = load_experiment_config(f.config_path);
    if (!f.kind.empty()) {
        if (f.kind == "degree_sequence") {
            cfg.kind = ConstraintKind::DegreeSequence;
        } else if (f.kind == "edge_count") {
            cfg.kind = ConstraintKind::EdgeCount;
        } else {
            throw config_error("unknown constraint kind: " + f.kind);
        }
    }
    if (!f.n_list.empty()) cfg.n_list = f.n_list;
    if (f.n > 0) cfg.n_list = {f.n};
    if (f.density >= 0.0) cfg.density = f.density;
    if (f.ultra_dense) cfg.ultra_dense = true;
    if (f.samples > 0) cfg.samples_per_n = f.samples;
    if (f.seed_set) cfg.seed = f.seed;
    if (f.workers >= 0) cfg.workers = f.workers;
    return cfg;
}

// Writes body under the resolved output directory and records it in the
// manifest file list.
std::string emit(RunManifest& manifest, const std::string& dir,
                 const std::string& name, const std::string& body) {
    std::string path = write_text_file(dir, name, body);
    manifest.files.push_back(manifest_entry(path));
    return path;
}

template <class WriteBody>
std::string render_csv(WriteBody&& write_body) {
    std::ostringstream out;
    write_body(out);
    return out.str();
}

int cmd_sample(const ConstraintFlags& cf, const std::string& ensemble,
               const std::string& method, int count, std::uint64_t seed,
               const std::string& out_dir, const std::string& command_line) {
    ConstraintSpec spec = make_constraint(cf);
    RunManifest manifest;
    manifest.command = command_line;
    manifest.seed = seed;
    manifest.config_json = constraint_to_json(spec);
    manifest.started_at = utc_timestamp();

    MicSamplerConfig mic;
    if (method == "edge_swap_mcmc") {
        mic.method = MicMethod::EdgeSwapMcmc;
    } else if (method == "pairing_rejection") {
        mic.method = MicMethod::PairingRejection;
    } else if (method != "auto") {
        throw config_error("unknown sampler method: " + method);
    }

    std::vector<Graph> graphs;
    graphs.reserve(count);
    if (ensemble == "canonical") {
        CanonicalModel model = calibrate(spec);
        for (int i = 0; i < count; ++i)
            graphs.push_back(sample_canonical(model, derive_seed(seed, i)));
    } else if (ensemble == "microcanonical") {
        if (spec.kind == ConstraintKind::EdgeCount) {
            for (int i = 0; i < count; ++i)
                graphs.push_back(
                    sample_mic_edge_count(spec.n, spec.edge_total, derive_seed(seed, i)));
        } else {
            DegreeSampler sampler(spec, mic, derive_seed(seed, 0));
            for (int i = 0; i < count; ++i) graphs.push_back(sampler.next());
        }
    } else {
        throw config_error("unknown ensemble: " + ensemble);
    }

    std::string dir = resolve_out_dir(out_dir);
    std::string base = report_basename("sample", spec_hash(spec), seed);
    for (int i = 0; i < count; ++i) {
        std::ostringstream body;
        write_edge_list(body, graphs[i]);
        std::string path =
            emit(manifest, dir, base + "_" + std::to_string(i) + ".txt", body.str());
        std::cout << path << "\n";
    }
    manifest.finished_at = utc_timestamp();
    write_manifest(dir, base, manifest);
    return 0;
}

int cmd_lambda(const std::string& edges_path, double tol) {
    Graph g = read_edge_list_file(edges_path);
    SpectralOptions opt{tol, 100000};
    EigenResult top = lambda1_full(g, opt);
    if (!top.converged)
        throw convergence_error("largest-eigenvalue iteration did not converge",
                                top.residual);
    std::cout << "lambda1 = " << format_g17(top.value) << "\n";
    if (g.n() >= 2) {
        EigenResult second = lambda2_full(g, top, opt);
        std::cout << "lambda2 = " << format_g17(second.value) << "\n";
    }
    if (g.edge_count() > 0) {
        double ratio = degree_ratio(g);
        std::cout << "degree_ratio = " << format_g17(ratio) << "\n";
        std::cout << "ratio_minus_lambda1 = " << format_g17(ratio - top.value) << "\n";
    }
    return 0;
}

int cmd_delta(const ExperimentFlags& ef, const std::string& out_dir,
              const std::string& command_line) {
    ExperimentConfig cfg = make_experiment_config(ef);
    DeltaReport report = delta_experiment(cfg);

    RunManifest manifest;
    manifest.command = command_line;
    manifest.seed = cfg.seed;
    manifest.config_json = experiment_config_to_json(cfg);
    manifest.started_at = utc_timestamp();

    std::string dir = resolve_out_dir(out_dir);
    std::string base = report_basename("delta", experiment_config_hash(cfg), cfg.seed);
    emit(manifest, dir, base + ".csv",
         render_csv([&](std::ostream& o) { write_delta_csv(o, report); }));
    manifest.finished_at = utc_timestamp();
    std::string manifest_path = write_manifest(dir, base, manifest);

    for (const DeltaRow& row : report.rows)
        std::cout << "n=" << row.n << " delta=" << format_g17(row.delta)
                  << " stderr=" << format_g17(row.delta_stderr) << "\n";
    std::cout << manifest_path << "\n";
    return 0;
}

int cmd_entropy(const ConstraintFlags& cf, bool scan, const std::vector<int>& n_list,
                const std::string& out_dir, const std::string& command_line) {
    if (scan) {
        if (n_list.empty()) throw config_error("--scan needs --n-list");
        if (cf.density < 0.0) throw config_error("--scan needs --p");
        ConstraintKind kind = cf.kind == "degree_sequence"
                                  ? ConstraintKind::DegreeSequence
                                  : ConstraintKind::EdgeCount;
        if (cf.kind != "degree_sequence" && cf.kind != "edge_count")
            throw config_error("unknown constraint kind: " + cf.kind);
        std::vector<EntropyScanRow> rows = entropy_scaling_scan(kind, n_list, cf.density);

        RunManifest manifest;
        manifest.command = command_line;
        manifest.started_at = utc_timestamp();
        std::ostringstream key;
        key << "entropy_scan|" << cf.kind << "|" << format_g17(cf.density);
        for (int n : n_list) key << "|" << n;
        std::string dir = resolve_out_dir(out_dir);
        std::string base = report_basename("entropy_scan", hex16(fnv1a64(key.str())), 0);
        emit(manifest, dir, base + ".csv",
             render_csv([&](std::ostream& o) { write_entropy_scan_csv(o, rows); }));
        manifest.finished_at = utc_timestamp();
        std::cout << write_manifest(dir, base, manifest) << "\n";
        return 0;
    }

    ConstraintSpec spec = make_constraint(cf);
    EntropyReport report = spec.kind == ConstraintKind::EdgeCount
                               ? relative_entropy_edge_count(spec.n, spec.edge_total)
                               : relative_entropy_enumerated(spec);
    std::cout << "s_n = " << format_g17(report.s_n) << "\n";
    if (report.gamma_size >= 0) std::cout << "gamma_size = " << report.gamma_size << "\n";
    return 0;
}

int cmd_enumerate(const ConstraintFlags& cf, int workers, const std::string& out_dir,
                  bool want_file, const std::string& command_line) {
    ConstraintSpec spec = make_constraint(cf);
    EnsembleTable table = build_ensemble_table(spec, kEnumerationCap, workers);
    std::string body = render_csv([&](std::ostream& o) {
        write_ensemble_table_csv(o, table);
    });
    std::cout << body;
    if (want_file) {
        RunManifest manifest;
        manifest.command = command_line;
        manifest.config_json = constraint_to_json(spec);
        manifest.started_at = utc_timestamp();
        std::string dir = resolve_out_dir(out_dir);
        std::string base = report_basename("enumerate", spec_hash(spec), 0);
        emit(manifest, dir, base + ".csv", body);
        manifest.finished_at = utc_timestamp();
        write_manifest(dir, base, manifest);
    }
    return 0;
}

int cmd_concentration(const ExperimentFlags& ef, const std::string& stat,
                      const std::string& out_dir, const std::string& command_line) {
    ExperimentConfig cfg = make_experiment_config(ef);
    ConcentrationReport report;
    std::string experiment;
    if (stat == "degree") {
        report = degree_concentration_stat(cfg);
        experiment = "conc_degree";
    } else if (stat == "ratio") {
        report = ratio_concentration(cfg);
        experiment = "conc_ratio";
    } else if (stat == "gap") {
        report = lambda_ratio_gap(cfg);
        experiment = "conc_gap";
    } else {
        throw config_error("unknown statistic family: " + stat +
                           " (expected degree, ratio, or gap)");
    }

    RunManifest manifest;
    manifest.command = command_line;
    manifest.seed = cfg.seed;
    manifest.config_json = experiment_config_to_json(cfg);
    manifest.started_at = utc_timestamp();
    std::string dir = resolve_out_dir(out_dir);
    std::string base = report_basename(experiment, experiment_config_hash(cfg), cfg.seed);
    emit(manifest, dir, base + ".csv",
         render_csv([&](std::ostream& o) { write_concentration_csv(o, report); }));
    emit(manifest, dir, base + "_fits.csv",
         render_csv([&](std::ostream& o) { write_tail_fit_csv(o, report); }));
    manifest.finished_at = utc_timestamp();
    std::cout << write_manifest(dir, base, manifest) << "\n";
    return 0;
}

int cmd_transfer(const ExperimentFlags& ef, double gamma, const std::string& out_dir,
                 const std::string& command_line) {
    ExperimentConfig cfg = make_experiment_config(ef);
    TransferReport report = transfer_check(cfg, gamma);

    RunManifest manifest;
    manifest.command = command_line;
    manifest.seed = cfg.seed;
    manifest.config_json = experiment_config_to_json(cfg);
    manifest.started_at = utc_timestamp();
    std::string dir = resolve_out_dir(out_dir);
    std::string base =
        report_basename("transfer", experiment_config_hash(cfg), cfg.seed);
    emit(manifest, dir, base + ".csv",
         render_csv([&](std::ostream& o) { write_transfer_csv(o, report); }));
    manifest.finished_at = utc_timestamp();
    std::cout << write_manifest(dir, base, manifest) << "\n";
    return 0;
}

// The committed reference tables: small constraints whose ensemble averages
// come from exhaustive iteration.
std::vector<ConstraintSpec> golden_specs() {
    return {
        ConstraintSpec::edge_count(4, 3), ConstraintSpec::regular(4, 2),
        ConstraintSpec::edge_count(5, 5), ConstraintSpec::regular(5, 2),
        ConstraintSpec::edge_count(6, 7), ConstraintSpec::regular(6, 3),
    };
}

int cmd_golden_regen(const std::string& out_dir, int workers) {
    std::vector<EnsembleTable> tables;
    for (const ConstraintSpec& spec : golden_specs())
        tables.push_back(build_ensemble_table(spec, kEnumerationCap, workers));
    std::string dir = resolve_out_dir(out_dir);
    std::string path = write_text_file(dir, "golden.csv", render_csv([&](std::ostream& o) {
                                           write_golden_csv(o, tables);
                                       }));
    std::cout << path << "\n";
    return 0;
}

std::string join_args(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained random-graph ensembles: sampling, spectra, entropies"};
    app.require_subcommand(1);
    std::string command_line = join_args(argc, argv);

    std::string out_dir;
    ConstraintFlags sample_cf;
    std::string sample_ensemble = "canonical";
    std::string sample_method = "auto";
    int sample_count = 1;
    std::uint64_t sample_seed = 1;
    CLI::App* sample = app.add_subcommand("sample", "Draw graphs from an ensemble");
    add_constraint_flags(sample, sample_cf);
    sample->add_option("--ensemble", sample_ensemble, "canonical or microcanonical");
    sample->add_option("--method", sample_method,
                       "auto, edge_swap_mcmc, or pairing_rejection");
    sample->add_option("--count", sample_count, "Number of graphs");
    sample->add_option("--seed", sample_seed, "Root RNG seed");
    sample->add_option("--out-dir", out_dir, "Output directory");

    std::string lambda_edges;
    double lambda_tol = 1e-10;
    CLI::App* lambda_cmd =
        app.add_subcommand("lambda", "Spectral statistics of one edge-list graph");
    lambda_cmd->add_option("--edges", lambda_edges, "Edge list file")->required();
    lambda_cmd->add_option("--tol", lambda_tol, "Rayleigh residual tolerance");

    ExperimentFlags delta_ef;
    CLI::App* delta = app.add_subcommand("delta", "Ensemble gap of the largest eigenvalue");
    add_experiment_flags(delta, delta_ef);
    delta->add_option("--out-dir", out_dir, "Output directory");

    ConstraintFlags entropy_cf;
    bool entropy_scan = false;
    std::vector<int> entropy_n_list;
    CLI::App* entropy = app.add_subcommand("entropy", "Relative entropy of the ensemble pair");
    add_constraint_flags(entropy, entropy_cf);
    entropy->add_flag("--scan", entropy_scan, "Scaling scan over --n-list");
    entropy->add_option("--n-list", entropy_n_list, "Sizes to scan")->delimiter(',');
    entropy->add_option("--out-dir", out_dir, "Output directory");

    ConstraintFlags enum_cf;
    int enum_workers = 0;
    CLI::App* enumerate_cmd =
        app.add_subcommand("enumerate", "Exact ensemble averages by exhaustive iteration");
    add_constraint_flags(enumerate_cmd, enum_cf);
    enumerate_cmd->add_option("--workers", enum_workers, "Worker threads");
    CLI::Option* enum_out = enumerate_cmd->add_option("--out-dir", out_dir,
                                                      "Write CSV artifact here as well");

    ExperimentFlags conc_ef;
    std::string conc_stat = "degree";
    CLI::App* concentration =
        app.add_subcommand("concentration", "Tail statistics of constraint functionals");
    add_experiment_flags(concentration, conc_ef);
    concentration->add_option("--stat", conc_stat, "degree, ratio, or gap");
    concentration->add_option("--out-dir", out_dir, "Output directory");

    ExperimentFlags transfer_ef;
    double transfer_gamma = 1.0;
    CLI::App* transfer =
        app.add_subcommand("transfer", "Event-probability transfer diagnostics");
    add_experiment_flags(transfer, transfer_ef);
    transfer->add_option("--gamma", transfer_gamma, "Event half-width");
    transfer->add_option("--out-dir", out_dir, "Output directory");

    int golden_workers = 0;
    CLI::App* golden = app.add_subcommand("golden-regen", "Regenerate reference tables");
    golden->add_option("--out-dir", out_dir, "Output directory (default data/golden)");
    golden->add_option("--workers", golden_workers, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (dynamic_cast<const CLI::CallForHelp*>(&e) != nullptr ||
            dynamic_cast<const CLI::CallForAllHelp*>(&e) != nullptr ||
            dynamic_cast<const CLI::CallForVersion*>(&e) != nullptr)
            return code;
        return 2;
    }

    try {
        if (sample->parsed())
            return cmd_sample(sample_cf, sample_ensemble, sample_method, sample_count,
                              sample_seed, out_dir, command_line);
        if (lambda_cmd->parsed()) return cmd_lambda(lambda_edges, lambda_tol);
        if (delta->parsed()) return cmd_delta(delta_ef, out_dir, command_line);
        if (entropy->parsed())
            return cmd_entropy(entropy_cf, entropy_scan, entropy_n_list, out_dir,
                               command_line);
        if (enumerate_cmd->parsed()) {
            bool want_file = enum_out->count() > 0 ||
                             resolve_out_dir(out_dir) != ".";
            return cmd_enumerate(enum_cf, enum_workers, out_dir, want_file, command_line);
        }
        if (concentration->parsed())
            return cmd_concentration(conc_ef, conc_stat, out_dir, command_line);
        if (transfer->parsed())
            return cmd_transfer(transfer_ef, transfer_gamma, out_dir, command_line);
        if (golden->parsed())
            return cmd_golden_regen(out_dir.empty() ? "data/golden" : out_dir,
                                    golden_workers);
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
