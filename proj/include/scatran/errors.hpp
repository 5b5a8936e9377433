#pragma once

#include <stdexcept>
#include <string>

namespace scatran {

/// Invalid configuration or construction parameters. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime failure of a numerical routine (degenerate input, NaN, stagnation).
/// CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), final_residual(residual) {}
    double final_residual;
};

} // namespace scatran
