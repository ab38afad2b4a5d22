#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ensp/graph.hpp"

namespace ensp {

enum class ConstraintKind { DegreeSequence, EdgeCount };

// Target of a hard constraint: either the full degree sequence or the total
// edge count.  Factories accept any integer targets so that infeasible
// specs can still be inspected; validate() enforces the ranges.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::EdgeCount;
    int n = 0;
    std::vector<int> degrees;     // DegreeSequence target, length n
    std::int64_t edge_total = 0;  // EdgeCount target

    static ConstraintSpec degree_sequence(int n, std::vector<int> degrees);
    static ConstraintSpec regular(int n, int d);
    static ConstraintSpec edge_count(int n, std::int64_t L);

    // Targets matched to a density: d = round(density*(n-1)), decremented by
    // one when n*d is odd; L = round(density * n(n-1)/2).  Both ensembles
    // then share the exact finite-n constraint.
    static ConstraintSpec rounded_regular(int n, double density);
    static ConstraintSpec rounded_edge_count(int n, double density);

    // True for a degree target with all entries equal (includes n <= 1).
    bool is_constant_degree() const;
    int dimension() const { return kind == ConstraintKind::EdgeCount ? 1 : n; }

    // Throws config_error when targets are out of range for n.
    void validate() const;

    bool operator==(const ConstraintSpec&) const = default;
};

// Evaluates the constraint map on g: the degree sequence, or the edge count
// as a length-1 vector.
std::vector<std::int64_t> constraint_value(const Graph& g, const ConstraintSpec& spec);

// Exact membership test for the constraint's realization set.
bool in_gamma(const Graph& g, const ConstraintSpec& spec);

// True iff at least one simple graph realizes the target.  EdgeCount: range
// check.  DegreeSequence: even sum plus the Erdos-Gallai inequalities.
// Out-of-range targets return false rather than throwing.
bool is_graphical(const ConstraintSpec& spec);

// JSON form {"kind": "degree_sequence"|"edge_count", "n": int, "target": ...}.
std::string constraint_to_json(const ConstraintSpec& spec);
ConstraintSpec constraint_from_json(const std::string& text);
ConstraintSpec load_constraint_file(const std::string& path);

// Digest of the canonical JSON form, as 16 hex digits.
std::string spec_hash(const ConstraintSpec& spec);

}  // namespace ensp
