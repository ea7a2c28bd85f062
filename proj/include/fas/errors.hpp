#pragma once

#include <stdexcept>
#include <string>

namespace fas {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative evaluation (series, continued fraction, quadrature) ran out of budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result not representable as a double; carries the natural log of the magnitude.
class OverflowError : public std::overflow_error {
public:
    OverflowError(const std::string& what, double log_value)
        : std::overflow_error(what), log_value_(log_value) {}

    double log_value() const noexcept { return log_value_; }

private:
    double log_value_;
};

}  // namespace fas
