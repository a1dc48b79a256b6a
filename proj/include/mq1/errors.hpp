#pragma once

#include <stdexcept>
#include <string>

namespace mq1 {

// All toolkit errors derive from Error so callers can catch one type at the
// CLI boundary and still discriminate in tests.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Reward domain cannot support the requested computation (e.g. lambda_max < 1).
struct UnsupportedDomainError : Error {
    using Error::Error;
};

// A function evaluation produced a non-finite value.
struct EvaluationError : Error {
    using Error::Error;
};

// Tabulated grid too coarse for finite differencing.
struct ResolutionError : Error {
    using Error::Error;
};

// Operation requires a different fluid-solution structure.
struct StructureError : Error {
    using Error::Error;
};

// Requested parameters violate a feasibility bound; message names the bound.
struct InfeasibleError : Error {
    using Error::Error;
};

// Chain is unstable or stability cannot be certified.
struct StabilityError : Error {
    using Error::Error;
};

// Inputs that must come from the same pipeline do not match.
struct ConsistencyError : Error {
    using Error::Error;
};

// Config file problems; message carries location diagnostics.
struct ConfigError : Error {
    using Error::Error;
};

// Regression fit cannot be performed (too few points, degenerate abscissa).
struct FitError : Error {
    using Error::Error;
};

// File I/O failure; message carries the path.
struct IoError : Error {
    using Error::Error;
};

}  // namespace mq1
