#pragma once

#include <stdexcept>
#include <string>

namespace relaylab {

/// Invalid user-facing configuration (unknown strategy, bad flag combination).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of an otherwise well-posed numerical computation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of its subdivision budget.
class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double partial, double error_estimate)
        : NumericalError(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

/// A root search was handed an interval without a sign change.
class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The optimal-layering construction produced a non-monotone residual interference.
class AllocationError : public NumericalError {
public:
    AllocationError(const std::string& what, double lo, double hi)
        : NumericalError(what), lo_(lo), hi_(hi) {}

    /// Interval on which the residual interference increased.
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

}  // namespace relaylab
