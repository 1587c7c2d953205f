// quadrature.hpp: adaptive Gauss-Kronrod wrapper (private to the library).

#pragma once

#include "nhqhe/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nhqhe::detail {

// Relative target handed to the adaptive refinement. Smooth integrands reach
// it within a few bisections; the absolute `tol` is the acceptance gate.
inline constexpr double kRefineRelTol = 1e-14;
inline constexpr unsigned kMaxDepth = 12;

template <class F>
double integrate(F&& f, double a, double b, double tol, const std::string& what) {
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, kMaxDepth, kRefineRelTol, &error, &l1);
    if (!std::isfinite(value)) {
        throw QuadratureError(what + ": non-finite integral", value, error);
    }
    // Cancellation can leave the estimate at roundoff level relative to the L1 norm.
    const double allowed = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * l1);
    if (error > allowed) {
        throw QuadratureError(what + ": quadrature did not converge (error estimate " + std::to_string(error) +
                                  ")",
                              value, error);
    }
    return value;
}

}  // namespace nhqhe::detail
