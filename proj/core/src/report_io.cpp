#include "ensp/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ensp/constraint.hpp"
#include "ensp/errors.hpp"
#include "ensp/hash.hpp"

namespace ensp {

namespace {

std::string csv_bool(bool b) { return b ? "1" : "0"; }

void end_row(std::ostream& out) { out << '\n'; }

}  // namespace

std::string format_g17(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

void write_delta_csv(std::ostream& out, const DeltaReport& report) {
    out << "n,p,can_mean,can_stderr,can_variance,mic_mean,mic_stderr,mic_exact,"
           "delta,delta_stderr,fk_prediction,fk_error_scale,regime_ok\n";
    for (const DeltaRow& r : report.rows) {
        out << r.n << ',' << format_g17(r.p) << ',' << format_g17(r.can_mean) << ','
            << format_g17(r.can_stderr) << ',' << format_g17(r.can_variance) << ','
            << format_g17(r.mic_mean) << ',' << format_g17(r.mic_stderr) << ','
            << csv_bool(r.mic_exact) << ',' << format_g17(r.delta) << ','
            << format_g17(r.delta_stderr) << ',' << format_g17(r.fk) << ','
            << format_g17(r.fk_error_scale) << ',' << csv_bool(r.regime_ok);
        end_row(out);
    }
}

void write_variance_csv(std::ostream& out, const VarianceReport& report) {
    out << "n,p,variance,variance_lo,variance_hi,target_variance,mean_shift,"
           "shift_stderr,target_shift\n";
    for (const VarianceRow& r : report.rows) {
        out << r.n << ',' << format_g17(r.p) << ',' << format_g17(r.variance) << ','
            << format_g17(r.variance_lo) << ',' << format_g17(r.variance_hi) << ','
            << format_g17(r.target_variance) << ',' << format_g17(r.mean_shift) << ','
            << format_g17(r.shift_stderr) << ',' << format_g17(r.target_shift);
        end_row(out);
    }
}

void write_concentration_csv(std::ostream& out, const ConcentrationReport& report) {
    out << "n,p,statistic,ensemble,samples,q90,q99,q999,scale,q99_over_scale,"
           "threshold,exceed_count,exceed_upper\n";
    for (const ConcentrationRow& r : report.rows) {
        out << r.n << ',' << format_g17(r.p) << ',' << r.statistic << ',' << r.ensemble
            << ',' << r.samples << ',' << format_g17(r.q90) << ',' << format_g17(r.q99)
            << ',' << format_g17(r.q999) << ',' << format_g17(r.scale) << ','
            << format_g17(r.q99_over_scale) << ',' << format_g17(r.threshold) << ','
            << r.exceed_count << ',' << format_g17(r.exceed_upper);
        end_row(out);
    }
}

void write_tail_fit_csv(std::ostream& out, const ConcentrationReport& report) {
    out << "statistic,xi,nu,r2,ok,note\n";
    for (const TailFit& f : report.fits) {
        out << f.statistic << ',' << format_g17(f.xi) << ',' << format_g17(f.nu) << ','
            << format_g17(f.r2) << ',' << csv_bool(f.ok) << ',' << f.note;
        end_row(out);
    }
}

void write_transfer_csv(std::ostream& out, const TransferReport& report) {
    out << "n,p,gamma,samples,hits,p_event_compl,zero_hit,s_n,exp_neg_s,ratio\n";
    for (const TransferRow& r : report.rows) {
        out << r.n << ',' << format_g17(r.p) << ',' << format_g17(r.gamma) << ','
            << r.samples << ',' << r.hits << ',' << format_g17(r.p_event_compl) << ','
            << csv_bool(r.zero_hit) << ',' << format_g17(r.s_n) << ','
            << format_g17(r.exp_neg_s) << ',' << format_g17(r.ratio);
        end_row(out);
    }
}

void write_entropy_scan_csv(std::ostream& out, const std::vector<EntropyScanRow>& rows) {
    out << "n,s_n,s_n_minus_log_n,s_n_over_nlogn\n";
    for (const EntropyScanRow& r : rows) {
        out << r.n << ',' << format_g17(r.s_n) << ',' << format_g17(r.s_minus_log_n)
            << ',' << format_g17(r.s_over_nlogn);
        end_row(out);
    }
}

namespace {

void append_table_rows(std::ostream& out, const EnsembleTable& table) {
    std::string hash = spec_hash(table.spec);
    for (std::size_t i = 0; i < table.functional_names.size(); ++i) {
        out << hash << ',' << table.functional_names[i] << ','
            << format_g17(table.mic_values[i]) << ',' << format_g17(table.can_values[i])
            << ',' << table.gamma_size;
        end_row(out);
    }
}

}  // namespace

void write_ensemble_table_csv(std::ostream& out, const EnsembleTable& table) {
    out << "spec_hash,functional,mic_value,can_value,gamma_size\n";
    append_table_rows(out, table);
}

void write_golden_csv(std::ostream& out, const std::vector<EnsembleTable>& tables) {
    out << "spec_hash,functional,mic_value,can_value,gamma_size\n";
    for (const EnsembleTable& table : tables) append_table_rows(out, table);
}

std::string report_basename(const std::string& experiment,
                            const std::string& config_hash, std::uint64_t seed) {
    return experiment + "_" + config_hash + "_" + std::to_string(seed);
}

std::string resolve_out_dir(const std::string& requested) {
    const char* env = std::getenv("ENSEMBLE_SPECTRA_OUT");
    if (env != nullptr && env[0] != '\0') return env;
    if (!requested.empty()) return requested;
    return ".";
}

std::string write_text_file(const std::string& dir, const std::string& name,
                            const std::string& body) {
    std::filesystem::path target(dir);
    std::error_code ec;
    std::filesystem::create_directories(target, ec);
    if (ec) throw io_error("cannot create directory " + dir + ": " + ec.message());
    target /= name;
    std::ofstream out(target, std::ios::binary);
    if (!out) throw io_error("cannot open " + target.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw io_error("write failed: " + target.string());
    return target.string();
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path + " for digest");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return hex16(fnv1a64(buffer.str()));
}

ManifestFile manifest_entry(const std::string& path) {
    return ManifestFile{path, file_digest(path)};
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["tool_version"] = manifest.tool_version;
    j["seed"] = manifest.seed;
    if (manifest.config_json.empty()) {
        j["config"] = nullptr;
    } else {
        try {
            j["config"] = nlohmann::json::parse(manifest.config_json);
        } catch (const nlohmann::json::exception&) {
            j["config"] = manifest.config_json;
        }
    }
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["files"] = nlohmann::json::array();
    for (const ManifestFile& f : manifest.files)
        j["files"].push_back({{"path", f.path}, {"digest", f.digest}});
    return j.dump(2) + "\n";
}

std::string write_manifest(const std::string& dir, const std::string& basename,
                           const RunManifest& manifest) {
    return write_text_file(dir, basename + "_manifest.json", manifest_to_json(manifest));
}

}  // namespace ensp
