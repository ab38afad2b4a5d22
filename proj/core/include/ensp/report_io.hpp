#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ensp/entropy.hpp"
#include "ensp/enumeration.hpp"
#include "ensp/experiments.hpp"

namespace ensp {

inline constexpr const char* kToolVersion = "0.1.0";

// Shortest representation that round-trips a double (17 significant digits).
std::string format_g17(double x);

// CSV bodies.  Booleans are written as 0/1; text cells never contain commas.
void write_delta_csv(std::ostream& out, const DeltaReport& report);
void write_variance_csv(std::ostream& out, const VarianceReport& report);
void write_concentration_csv(std::ostream& out, const ConcentrationReport& report);
void write_tail_fit_csv(std::ostream& out, const ConcentrationReport& report);
void write_transfer_csv(std::ostream& out, const TransferReport& report);
void write_entropy_scan_csv(std::ostream& out, const std::vector<EntropyScanRow>& rows);
// Shared schema for exact enumeration tables and the golden data set:
// spec_hash, functional, mic_value, can_value, gamma_size.
void write_ensemble_table_csv(std::ostream& out, const EnsembleTable& table);
void write_golden_csv(std::ostream& out, const std::vector<EnsembleTable>& tables);

// "{experiment}_{config hash}_{seed}"; append an extension to use it.
std::string report_basename(const std::string& experiment,
                            const std::string& config_hash, std::uint64_t seed);

// The ENSEMBLE_SPECTRA_OUT environment variable overrides the requested
// directory; falls back to "." when both are empty.
std::string resolve_out_dir(const std::string& requested);

// Creates the directory if needed and writes the body; returns the path.
std::string write_text_file(const std::string& dir, const std::string& name,
                            const std::string& body);

struct ManifestFile {
    std::string path;
    std::string digest;  // 16 hex digits over the file bytes
};

// Sidecar record of one tool invocation: what ran, with which config and
// seed, when, and the digests of everything it wrote.
struct RunManifest {
    std::string command;
    std::string tool_version = kToolVersion;
    std::uint64_t seed = 0;
    std::string config_json;  // exact configuration echo
    std::string started_at;   // UTC, e.g. 2024-05-01T12:00:00Z
    std::string finished_at;
    std::vector<ManifestFile> files;
};

std::string utc_timestamp();
std::string file_digest(const std::string& path);
ManifestFile manifest_entry(const std::string& path);
std::string manifest_to_json(const RunManifest& manifest);
// Writes "{basename}_manifest.json" into dir; returns the path.
std::string write_manifest(const std::string& dir, const std::string& basename,
                           const RunManifest& manifest);

}  // namespace ensp
