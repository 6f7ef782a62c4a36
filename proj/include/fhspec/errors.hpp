#pragma once

#include <stdexcept>
#include <string>

namespace fhspec {

/// Argument outside the mathematical domain of an operation (poles, non-positive
/// arguments, exponents outside their admissible interval).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Hypothesis of an asymptotic statement is not met (e.g. no unique dominant
/// singularity).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace fhspec
