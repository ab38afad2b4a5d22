#pragma once

#include <cstdint>
#include <vector>

#include "ensp/constraint.hpp"
#include "ensp/enumeration.hpp"

namespace ensp {

enum class EntropyMethod { ClosedForm, Enumeration };

// Relative entropy of the uniform hard-constraint law with respect to the
// calibrated independent-edge law: s_n = -log P_can(realization set).
struct EntropyReport {
    ConstraintSpec spec;
    double s_n = 0.0;
    EntropyMethod method = EntropyMethod::ClosedForm;
    std::int64_t gamma_size = -1;   // -1 when too large for exact integers
    double log_gamma_size = 0.0;
    double p_can_gamma_log = 0.0;   // s_n = -p_can_gamma_log
};

// Closed form for the edge-count constraint:
//   s = -(log C(M,L) + L log p + (M-L) log(1-p)),  p = L/M,  M = n(n-1)/2.
EntropyReport relative_entropy_edge_count(int n, std::int64_t L);

// Exhaustive summation of the canonical law over the realization set.
EntropyReport relative_entropy_enumerated(const ConstraintSpec& spec,
                                          int cap_n = kEnumerationCap);

struct EntropyScanRow {
    int n = 0;
    double s_n = 0.0;
    double s_minus_log_n = 0.0;
    double s_over_nlogn = 0.0;
};
// Scaling diagnostic at a fixed density; degree-kind scans are limited to
// the enumeration cap.
std::vector<EntropyScanRow> entropy_scaling_scan(ConstraintKind kind,
                                                 const std::vector<int>& n_list,
                                                 double density);

}  // namespace ensp
