#pragma once

#include <stdexcept>
#include <string>

namespace sturmspec {

/** @brief Root of every error thrown by the library. */
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Coefficient sample failed a positivity/monotonicity check.
struct ValidationError : Error {
    using Error::Error;
};
// Bad domain: L <= 0, x outside [0,L], a gamma pole, ...
struct DomainError : Error {
    using Error::Error;
};
/** @brief Integrator ran out of steps; carries how far it got. */
struct IntegrationError : Error {
    double reached;
    IntegrationError(const std::string& what, double x) : Error(what), reached(x) {}
};
// Coefficient evaluation produced NaN/inf.
struct EvaluationError : Error {
    using Error::Error;
};
struct PoleError : Error {
    using Error::Error;
};
struct SearchError : Error {
    using Error::Error;
};
// Operation undefined for the given sign regime (alpha1 = 0, ...).
struct RegimeError : Error {
    using Error::Error;
};
struct SeriesError : Error {
    using Error::Error;
};
struct TransformError : Error {
    using Error::Error;
};
/** @brief Config or expression syntax problem; `where` is a key path or column. */
struct ParseError : Error {
    std::string where;
    ParseError(const std::string& what, std::string loc = {})
        : Error(loc.empty() ? what : loc + ": " + what), where(std::move(loc)) {}
};

}  // namespace sturmspec
