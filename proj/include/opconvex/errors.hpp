#pragma once

#include <stdexcept>
#include <string>

namespace opconvex {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix, vector or grid shapes.
struct ShapeError : Error {
    using Error::Error;
};

/// Input outside the mathematical domain of an operation
/// (non-positive spectrum, scalar function undefined at an eigenvalue, ...).
struct DomainError : Error {
    using Error::Error;
};

/// An iterative solver exhausted its iteration cap; carries the final residual.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual_val)
        : Error(what), residual(residual_val) {}
    double residual;
};

/// Invalid configuration: CLI flags, sampling windows, spec parameters.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace opconvex
