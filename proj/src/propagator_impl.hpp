// propagator_impl.hpp: closed-form linear-sweep propagator, generic over the
// complex scalar so that it can also be evaluated in extended precision.

#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace nhqhe::detail {

// Row-major entries of R(tau) exp(-i ((delta/2) sigma_z + sigma_x) tau) R(0)^-1,
// R(tau) = diag(e^{i phi(tau)/2}, e^{-i phi(tau)/2}), phi(tau) = phi_start + omega tau.
template <class C, class R>
std::array<C, 4> linear_sweep_propagator(const C& delta, const R& omega, const R& tau, const R& phi_start) {
    using std::abs;
    using std::cos;
    using std::exp;
    using std::sin;
    using std::sqrt;

    const C I(R(0), R(1));
    const R half(0.5);
    const C omega_c = half * sqrt(C(R(4)) + delta * delta);
    const C x = omega_c * tau;

    // sin(Omega tau) / Omega, continuous through Omega = 0.
    C s;
    if (abs(x) < R(1e-4)) {
        const C x2 = x * x;
        s = C(tau) * (C(R(1)) - x2 / R(6) + x2 * x2 / R(120));
    } else {
        s = sin(x) / omega_c;
    }
    const C c = cos(x);
    const C end = exp(I * (half * (phi_start + omega * tau)));
    const C end_conj = exp(-I * (half * (phi_start + omega * tau)));
    const C start = exp(-I * (half * phi_start));
    const C start_conj = exp(I * (half * phi_start));
    const C half_delta = delta * half;

    return {(c - I * half_delta * s) * end * start, -I * s * end * start_conj, -I * s * end_conj * start,
            (c + I * half_delta * s) * end_conj * start_conj};
}

}  // namespace nhqhe::detail
