#pragma once

#include <stdexcept>
#include <string>

namespace gensol {

/// Evaluation outside the domain of an expression, coefficient or equation.
/// Carries the abscissa where the violation was detected.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double location)
        : std::domain_error(what), location_(location) {}

    double location() const noexcept { return location_; }

private:
    double location_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative or time-stepping procedure failed (CFL, step underflow, no convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gensol
