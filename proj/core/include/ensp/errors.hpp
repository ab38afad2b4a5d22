#pragma once

#include <stdexcept>
#include <string>

namespace ensp {

// Bad user input: malformed config, out-of-range target, dimension mismatch.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solve ran out of its iteration budget.
struct convergence_error : std::runtime_error {
    convergence_error(const std::string& msg, double residual)
        : std::runtime_error(msg), residual(residual) {}
    double residual;
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ensp
