#ifndef QBM_ERRORS_HPP
#define QBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbm {

// Bad or inconsistent input (config files, parameter ranges).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation cannot produce a trustworthy number: divergent integrals,
// poles hit by Laplace evaluations, non-SPD matrices, solver blowup.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Monte Carlo output exists but fails its own quality gates (effective
// sample size collapse, heavy-tail guard).
struct StatisticalError : std::runtime_error {
    explicit StatisticalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qbm

#endif
