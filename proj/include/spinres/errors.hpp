#pragma once

#include <stdexcept>
#include <string>

namespace spinres {

/// Invalid parameters or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Eigensolver non-convergence, integrator step underflow, norm drift abort
/// and similar failures of the numerics themselves. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spinres
