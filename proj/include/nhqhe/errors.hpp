// errors.hpp: exception types shared by the nhqhe library and CLI.

#pragma once

#include <stdexcept>
#include <string>

namespace nhqhe {

// Parameter outside the physical domain (|gamma| >= 1, J <= 0, J1 <= J2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine did not reach its target accuracy, or a checked
// identity was violated beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature stopped before meeting its tolerance. Carries the
// value and error estimate that were reached.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

}  // namespace nhqhe
