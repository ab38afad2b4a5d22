#include "ensp/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ensp/errors.hpp"
#include "ensp/hash.hpp"

namespace ensp {

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ConstraintSpec ConstraintSpec::degree_sequence(int n, std::vector<int> degrees) {
    if (n < 0) throw config_error("vertex count must be nonnegative");
    if (static_cast<int>(degrees.size()) != n)
        throw config_error("degree target has length " + std::to_string(degrees.size()) +
                           ", expected n=" + std::to_string(n));
    ConstraintSpec s;
    s.kind = ConstraintKind::DegreeSequence;
    s.n = n;
    s.degrees = std::move(degrees);
    return s;
}

ConstraintSpec ConstraintSpec::regular(int n, int d) {
    return degree_sequence(n, std::vector<int>(n, d));
}

ConstraintSpec ConstraintSpec::edge_count(int n, std::int64_t L) {
    if (n < 0) throw config_error("vertex count must be nonnegative");
    ConstraintSpec s;
    s.kind = ConstraintKind::EdgeCount;
    s.n = n;
    s.edge_total = L;
    return s;
}

ConstraintSpec ConstraintSpec::rounded_regular(int n, double density) {
    if (density < 0.0 || density > 1.0) throw config_error("density outside [0,1]");
    int d = static_cast<int>(std::llround(density * (n - 1)));
    d = std::clamp(d, 0, std::max(0, n - 1));
    if ((static_cast<std::int64_t>(n) * d) % 2 != 0) --d;
    return regular(n, d);
}

ConstraintSpec ConstraintSpec::rounded_edge_count(int n, double density) {
    if (density < 0.0 || density > 1.0) throw config_error("density outside [0,1]");
    return edge_count(n, std::llround(density * static_cast<double>(pair_count(n))));
}

bool ConstraintSpec::is_constant_degree() const {
    if (kind != ConstraintKind::DegreeSequence) return false;
    return std::adjacent_find(degrees.begin(), degrees.end(), std::not_equal_to<>()) == degrees.end();
}

void ConstraintSpec::validate() const {
    if (kind == ConstraintKind::EdgeCount) {
        if (edge_total < 0 || edge_total > pair_count(n))
            throw config_error("edge count target " + std::to_string(edge_total) +
                               " out of range [0, " + std::to_string(pair_count(n)) + "]");
    } else {
        for (int k : degrees)
            if (k < 0 || k > n - 1)
                throw config_error("degree target " + std::to_string(k) +
                                   " out of range [0, " + std::to_string(n - 1) + "]");
    }
}

std::vector<std::int64_t> constraint_value(const Graph& g, const ConstraintSpec& spec) {
    if (g.n() != spec.n)
        throw config_error("graph has n=" + std::to_string(g.n()) +
                           ", constraint expects n=" + std::to_string(spec.n));
    if (spec.kind == ConstraintKind::EdgeCount) return {g.edge_count()};
    const auto deg = g.degrees();
    return std::vector<std::int64_t>(deg.begin(), deg.end());
}

bool in_gamma(const Graph& g, const ConstraintSpec& spec) {
    if (g.n() != spec.n) return false;
    if (spec.kind == ConstraintKind::EdgeCount) return g.edge_count() == spec.edge_total;
    const auto deg = g.degrees();
    return std::equal(deg.begin(), deg.end(), spec.degrees.begin(), spec.degrees.end());
}

bool is_graphical(const ConstraintSpec& spec) {
    if (spec.kind == ConstraintKind::EdgeCount)
        return spec.edge_total >= 0 && spec.edge_total <= pair_count(spec.n);

    std::int64_t sum = 0;
    for (int k : spec.degrees) {
        if (k < 0 || k > spec.n - 1) return false;
        sum += k;
    }
    if (sum % 2 != 0) return false;

    // Erdos-Gallai: with degrees sorted descending,
    //   sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)  for every k.
    std::vector<int> d = spec.degrees;
    std::sort(d.begin(), d.end(), std::greater<>());
    std::int64_t head = 0;
    for (int k = 1; k <= spec.n; ++k) {
        head += d[k - 1];
        std::int64_t tail = 0;
        for (int i = k; i < spec.n; ++i) tail += std::min(d[i], k);
        if (head > static_cast<std::int64_t>(k) * (k - 1) + tail) return false;
    }
    return true;
}

std::string constraint_to_json(const ConstraintSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    if (spec.kind == ConstraintKind::EdgeCount) {
        j["kind"] = "edge_count";
        j["target"] = spec.edge_total;
    } else {
        j["kind"] = "degree_sequence";
        j["target"] = spec.degrees;
    }
    return j.dump();
}

ConstraintSpec constraint_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("constraint JSON: ") + e.what());
    }
    try {
        const int n = j.at("n").get<int>();
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "edge_count")
            return ConstraintSpec::edge_count(n, j.at("target").get<std::int64_t>());
        if (kind == "degree_sequence")
            return ConstraintSpec::degree_sequence(n, j.at("target").get<std::vector<int>>());
        throw config_error("constraint JSON: unknown kind \"" + kind + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("constraint JSON: ") + e.what());
    }
}

ConstraintSpec load_constraint_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open constraint file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return constraint_from_json(buf.str());
}

std::string spec_hash(const ConstraintSpec& spec) {
    return hex16(fnv1a64(constraint_to_json(spec)));
}

}  // namespace ensp
