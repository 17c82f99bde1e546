#pragma once

#include <stdexcept>
#include <string>

namespace mixedgraph {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input files (CSV cells, sidecars, configs).
struct ParseError : Error {
    using Error::Error;
};

/// Contract violations on otherwise well-formed data: domain errors,
/// degenerate columns, unobserved levels, bad flag values.
struct ValidationError : Error {
    using Error::Error;
};

/// Numerical failures: NaN propagation, optimizer or projection
/// non-convergence, loss of positive definiteness.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace mixedgraph
