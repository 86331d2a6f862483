#pragma once

#include <stdexcept>
#include <string>

namespace bosecorr {

/// Argument outside the mathematical domain of an evaluator.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation at coincident points of a log- or power-divergent expression.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Invalid or inconsistent configuration (thresholds, cutoffs, config files).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An asymptotic formula was requested outside its validity window.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A series or quadrature failed to reach the requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved_bound)
        : std::runtime_error(what), achieved_bound_(achieved_bound) {}

    double achieved_bound() const noexcept { return achieved_bound_; }

private:
    double achieved_bound_;
};

/// Two results that must agree by construction do not.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// API misuse, e.g. mixing evaluation methods in one difference.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Bad input samples handed to a fitting routine.
class DataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace bosecorr
