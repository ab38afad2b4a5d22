#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ensp/constraint.hpp"
#include "ensp/graph.hpp"

namespace ensp {

// Exhaustive iteration over all 2^(n(n-1)/2) labeled graphs is feasible up
// to here; tests default to n <= 6.
inline constexpr int kEnumerationCap = 8;

// Mask of the pair indices incident to each vertex; degree of vertex i in
// the graph encoded by `mask` is popcount(mask & row_mask[i]).
std::vector<std::uint64_t> pair_row_masks(int n);

// |{g : constraint holds exactly}| by scanning all edge-set bitmasks.
std::int64_t exact_gamma_size(const ConstraintSpec& spec, int cap_n = kEnumerationCap,
                              int workers = 0);

using GraphFunctional = std::function<double(const Graph&)>;
using GraphPredicate = std::function<bool(const Graph&)>;

struct NamedFunctional {
    std::string name;
    GraphFunctional fn;
};
// lambda1, lambda2, degree_ratio (0 on edgeless graphs), edge_count.
const std::vector<NamedFunctional>& standard_functionals();

struct ExactExpectation {
    double mic_value = 0.0;   // average of f over the realization set
    double can_value = 0.0;   // sum of P_can(g) f(g) over all graphs
    std::int64_t gamma_size = 0;
    double p_can_gamma = 0.0;
};
ExactExpectation exact_expectation(const ConstraintSpec& spec, const GraphFunctional& f,
                                   int cap_n = kEnumerationCap, int workers = 0);

struct EnsembleTable {
    ConstraintSpec spec;
    std::int64_t gamma_size = 0;
    double p_can_gamma = 0.0;
    std::vector<std::string> functional_names;
    std::vector<double> mic_values;
    std::vector<double> can_values;
};
EnsembleTable build_ensemble_table(const ConstraintSpec& spec, int cap_n = kEnumerationCap,
                                   int workers = 0);

// Both sides of the conditional-law identity for B = {g in Gamma :
// event(g)}: exact uniform probability vs canonical probability ratio.
// Returns |P_mic(B) - P_can(B)/P_can(Gamma)|.
double transfer_identity_check(const ConstraintSpec& spec, const GraphPredicate& event,
                               int cap_n = kEnumerationCap);

// Sum of P_can over the whole graph space; equals 1 up to rounding.
double total_probability(const ConstraintSpec& spec, int cap_n = kEnumerationCap,
                         int workers = 0);

}  // namespace ensp
