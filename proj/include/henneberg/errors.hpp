#pragma once

#include <stdexcept>
#include <string>

namespace henneberg {

// Argument outside the domain of an operation (z = 0 with a principal
// part, theta_2 outside the family interval, r <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Weierstrass data whose periods do not close. Carries the offending
// residual so callers can report it.
class PeriodError : public std::runtime_error {
public:
    PeriodError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Iterative solver failed (Newton divergence, singular Jacobian,
// quadrature that does not settle).
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

// A structural expectation failed, e.g. a generator set that does not
// close into a group of the announced order.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed input file or flag; the message names the line or field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace henneberg
