#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensp/constraint.hpp"
#include "ensp/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_raw(const std::string& command) {
    CliResult r;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.out += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// keeps an inherited output override from leaking into the assertions
CliResult run_cli(const std::string& args) {
    return run_raw(std::string("env -u ENSEMBLE_SPECTRA_OUT ") + ENSP_CLI_PATH + " " + args);
}

CliResult run_cli_env(const std::string& out_env, const std::string& args) {
    return run_raw("ENSEMBLE_SPECTRA_OUT=" + out_env + " " + ENSP_CLI_PATH + " " + args);
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() /
                   ("ensp_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream body;
    body << in.rdbuf();
    return body.str();
}

double parse_after(const std::string& text, const std::string& prefix) {
    const auto pos = text.find(prefix);
    REQUIRE(pos != std::string::npos);
    return std::strtod(text.c_str() + pos + prefix.size(), nullptr);
}

std::vector<fs::path> files_matching(const fs::path& dir, const std::string& needle) {
    std::vector<fs::path> hits;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().filename().string().find(needle) != std::string::npos)
            hits.push_back(entry.path());
    std::sort(hits.begin(), hits.end());
    return hits;
}

}  // namespace

TEST_CASE("cli entropy closed form") {
    CliResult r = run_cli("entropy --kind edge_count --n 4 --L 3");
    CHECK(r.code == 0);
    CHECK(parse_after(r.out, "s_n = ") == doctest::Approx(1.1631508098056809).epsilon(1e-13));
    CHECK(r.out.find("gamma_size = 20") != std::string::npos);

    CliResult deg = run_cli("entropy --kind degree_sequence --n 4 --d 2");
    CHECK(deg.code == 0);
    CHECK(parse_after(deg.out, "s_n = ") == doctest::Approx(2.7204727211007665).epsilon(1e-13));
    CHECK(deg.out.find("gamma_size = 3") != std::string::npos);
}

TEST_CASE("cli lambda on an edge list") {
    fs::path dir = fresh_dir("lambda");
    fs::path edges = dir / "k4.txt";
    std::ofstream(edges) << "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

    CliResult r = run_cli("lambda --edges " + edges.string());
    CHECK(r.code == 0);
    CHECK(parse_after(r.out, "lambda1 = ") == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(parse_after(r.out, "lambda2 = ") == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(parse_after(r.out, "degree_ratio = ") == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(parse_after(r.out, "ratio_minus_lambda1 = ") ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    fs::remove_all(dir);
}

TEST_CASE("cli exit codes by failure class") {
    CHECK(run_cli("delta --config /nonexistent/config.json").code == 2);
    CHECK(run_cli("delta --bogus-flag 1").code == 2);
    CHECK(run_cli("not-a-subcommand").code == 2);
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("sample --kind edge_count --L 3").code == 2);  // no --n
    CHECK(run_cli("lambda --edges /nonexistent/edges.txt").code == 4);
    CHECK(run_cli("--help").code == 0);

    // degrees that force pair states have no finite soft calibration
    fs::path dir = fresh_dir("exit3");
    fs::path spec_file = dir / "boundary.json";
    std::ofstream(spec_file) << ensp::constraint_to_json(
        ensp::ConstraintSpec::degree_sequence(6, {4, 3, 3, 2, 1, 1}));
    CliResult r = run_cli("sample --constraint " + spec_file.string() +
                          " --ensemble canonical --out-dir " + dir.string());
    CHECK(r.code == 3);
    fs::remove_all(dir);
}

TEST_CASE("cli sample writes reproducible graphs and a manifest") {
    fs::path d1 = fresh_dir("sample1");
    fs::path d2 = fresh_dir("sample2");
    const std::string flags =
        "sample --kind edge_count --n 12 --L 30 --count 3 --seed 9 --out-dir ";
    CliResult r1 = run_cli(flags + d1.string());
    CliResult r2 = run_cli(flags + d2.string());
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);

    const auto graphs1 = files_matching(d1, ".txt");
    const auto graphs2 = files_matching(d2, ".txt");
    REQUIRE(graphs1.size() == 3);
    REQUIRE(graphs2.size() == 3);
    for (std::size_t i = 0; i < graphs1.size(); ++i) {
        CHECK(graphs1[i].filename() == graphs2[i].filename());
        CHECK(slurp(graphs1[i]) == slurp(graphs2[i]));
    }

    const auto manifests = files_matching(d1, "_manifest.json");
    REQUIRE(manifests.size() == 1);
    const json manifest = json::parse(slurp(manifests[0]));
    CHECK(manifest.at("tool_version") == ensp::kToolVersion);
    CHECK(manifest.at("seed") == 9);
    REQUIRE(manifest.at("files").size() == 3);
    for (const auto& entry : manifest.at("files")) {
        const std::string path = entry.at("path");
        CHECK(entry.at("digest") == ensp::file_digest(path));
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("cli delta writes csv named by config digest") {
    fs::path dir = fresh_dir("delta");
    CliResult r = run_cli(
        "delta --kind edge_count --n 10 --samples 40 --seed 3 --workers 1 --out-dir " +
        dir.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("n=10 delta=") != std::string::npos);

    const auto csvs = files_matching(dir, ".csv");
    REQUIRE(csvs.size() == 1);
    const std::string name = csvs[0].filename().string();
    CHECK(name.rfind("delta_", 0) == 0);
    CHECK(name.find("_3.csv") != std::string::npos);
    const std::string body = slurp(csvs[0]);
    CHECK(body.rfind("n,p,can_mean,can_stderr,can_variance,mic_mean,mic_stderr,mic_exact,",
                     0) == 0);

    const auto manifests = files_matching(dir, "_manifest.json");
    REQUIRE(manifests.size() == 1);
    const json manifest = json::parse(slurp(manifests[0]));
    REQUIRE(manifest.at("files").size() == 1);
    CHECK(manifest.at("files")[0].at("digest") == ensp::file_digest(csvs[0].string()));
    CHECK(manifest.at("config").at("samples_per_n") == 40);
    fs::remove_all(dir);
}

TEST_CASE("cli output directory obeys the environment override") {
    fs::path via_env = fresh_dir("envdir");
    fs::path via_flag = fresh_dir("flagdir");
    CliResult r = run_cli_env(via_env.string(),
                              "delta --kind edge_count --n 8 --samples 20 --seed 2 "
                              "--workers 1 --out-dir " +
                                  via_flag.string());
    CHECK(r.code == 0);
    CHECK(!files_matching(via_env, ".csv").empty());
    CHECK(files_matching(via_flag, ".csv").empty());
    fs::remove_all(via_env);
    fs::remove_all(via_flag);
}

TEST_CASE("cli enumerate prints the exact table") {
    CliResult r = run_cli("enumerate --kind degree_sequence --n 4 --d 2");
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "spec_hash,functional,mic_value,can_value,gamma_size");
    bool lambda1_row = false;
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find(",lambda1,") == std::string::npos) continue;
        lambda1_row = true;
        std::istringstream cells(line);
        std::vector<std::string> row;
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(cell);
        REQUIRE(row.size() == 5);
        // every member is a labeled 4-cycle
        CHECK(std::strtod(row[2].c_str(), nullptr) == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(row[4] == "3");
    }
    CHECK(lambda1_row);
}

TEST_CASE("cli entropy scan writes the scaling table") {
    fs::path dir = fresh_dir("scan");
    CliResult r = run_cli("entropy --scan --kind edge_count --p 0.5 --n-list 8,16,32 "
                          "--out-dir " +
                          dir.string());
    CHECK(r.code == 0);
    const auto csvs = files_matching(dir, "entropy_scan_");
    REQUIRE(!csvs.empty());
    std::istringstream lines(slurp(csvs[0]));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,s_n,s_n_minus_log_n,s_n_over_nlogn");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);

    CHECK(run_cli("entropy --scan --kind edge_count --n-list 8").code == 2);  // no --p
    fs::remove_all(dir);
}

TEST_CASE("cli golden tables regenerate byte for byte") {
    fs::path d1 = fresh_dir("golden1");
    fs::path d2 = fresh_dir("golden2");
    CliResult r1 = run_cli("golden-regen --out-dir " + d1.string());
    CliResult r2 = run_cli("golden-regen --out-dir " + d2.string());
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    const std::string body = slurp(d1 / "golden.csv");
    CHECK(body == slurp(d2 / "golden.csv"));
    CHECK(body.rfind("spec_hash,functional,mic_value,can_value,gamma_size\n", 0) == 0);
    // matches the committed reference data
    CHECK(body == slurp(fs::path(ENSP_GOLDEN_PATH)));
    fs::remove_all(d1);
    fs::remove_all(d2);
}
