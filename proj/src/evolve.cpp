#include "nhqhe/evolve.hpp"

#include "nhqhe/errors.hpp"
#include "propagator_impl.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nhqhe {

namespace {

constexpr cplx I{0.0, 1.0};

Matrix2 frame_propagator(cplx delta, double omega, double tau, double phi_start) {
    const auto e = detail::linear_sweep_propagator(delta, omega, tau, phi_start);
    Matrix2 u;
    u << e[0], e[1], e[2], e[3];
    return u;
}

void require_finite(double omega, double tau) {
    if (!std::isfinite(omega) || !std::isfinite(tau)) {
        throw DomainError("omega and tau must be finite");
    }
}

}  // namespace

double PropagatorPair::biorthonormal_defect() const {
    return (U_tilde.adjoint() * U - Matrix2::Identity()).norm();
}

Matrix2 exact_propagator(const SystemParams& params, double omega, double tau, double phi_start) {
    require_finite(omega, tau);
    const cplx delta = 2.0 * I * params.gamma() + omega;
    return frame_propagator(delta, omega, tau, phi_start);
}

Matrix2 left_propagator(const SystemParams& params, double omega, double tau, double phi_start) {
    require_finite(omega, tau);
    // Re(4 + Delta^2) = 4(1 - g^2) + omega^2 > 0 keeps the square root off its
    // branch cut, so sqrt(conj(.)) = conj(sqrt(.)).
    const cplx delta = std::conj(2.0 * I * params.gamma() + omega);
    return frame_propagator(delta, omega, tau, phi_start);
}

double biorthonormal_defect_extended(const SystemParams& params, double omega, double tau, double phi_start) {
    require_finite(omega, tau);
    using C = boost::multiprecision::cpp_complex_50;
    using R = C::value_type;
    const C I(R(0), R(1));
    const R g(params.gamma()), w(omega), t(tau), p(phi_start);
    const C delta = I * R(2) * g + C(w);
    const C delta_left = -I * R(2) * g + C(w);
    const auto u = detail::linear_sweep_propagator(delta, w, t, p);
    const auto v = detail::linear_sweep_propagator(delta_left, w, t, p);
    // (V^dagger U)_ij = sum_k conj(V_ki) U_kj
    R sum(0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            C e = conj(v[i]) * u[j] + conj(v[2 + i]) * u[2 + j];
            if (i == j) {
                e -= C(R(1));
            }
            sum += norm(e);
        }
    }
    return static_cast<double>(sqrt(sum));
}

PropagatorPair compose_segments(std::span<const DriveSegment> segments, const SystemParams& params) {
    PropagatorPair out{Matrix2::Identity(), Matrix2::Identity()};
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const DriveSegment& seg = segments[k];
        if (k > 0) {
            const double expected = segments[k - 1].phi_end();
            const double scale = std::max({1.0, std::abs(expected), std::abs(seg.phi_start)});
            if (std::abs(seg.phi_start - expected) > 1e-12 * scale) {
                throw DomainError("segment " + std::to_string(k) + " starts at phi = " +
                                  std::to_string(seg.phi_start) + " but the previous segment ends at " +
                                  std::to_string(expected));
            }
        }
        out.U = exact_propagator(params, seg.omega, seg.tau, seg.phi_start) * out.U;
        out.U_tilde = left_propagator(params, seg.omega, seg.tau, seg.phi_start) * out.U_tilde;
    }
    return out;
}

Matrix2 expm2(const Matrix2& A) {
    const cplx half_trace = 0.5 * A.trace();
    const Matrix2 B = A - half_trace * Matrix2::Identity();
    // B^2 = -det(B) 1 for traceless B.
    const cplx s = std::sqrt(-B.determinant());
    cplx sinh_over_s;
    if (std::abs(s) < 1e-4) {
        const cplx s2 = s * s;
        sinh_over_s = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
    } else {
        sinh_over_s = std::sinh(s) / s;
    }
    return std::exp(half_trace) * (std::cosh(s) * Matrix2::Identity() + sinh_over_s * B);
}

Matrix2 stepwise_propagator(const TimedPath& path, double dt, const SystemParams& params, Side side) {
    if (!(dt > 0.0)) {
        throw DomainError("dt must be positive");
    }
    const double span = path.t_end - path.t_start;
    if (span < 0.0) {
        throw DomainError("path must run forward in time");
    }
    const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    if (steps == 0) {
        return Matrix2::Identity();
    }
    const double h = span / static_cast<double>(steps);
    Matrix2 u = Matrix2::Identity();
    for (long n = 0; n < steps; ++n) {
        const double t_mid = path.t_start + (static_cast<double>(n) + 0.5) * h;
        Matrix2 H = build_hamiltonian(params, ControlPoint{path.J(t_mid), path.phi(t_mid)});
        if (side == Side::left) {
            H.adjointInPlace();
        }
        u = expm2(-I * h * H) * u;
    }
    return u;
}

TimedPath linear_sweep_path(double omega, double tau, double phi_start) {
    return TimedPath{[](double) { return 1.0; },
                     [omega, phi_start](double t) { return phi_start + omega * t; }, 0.0, tau};
}

AdiabaticPhase adiabatic_phase(const SystemParams& params, Branch lambda, double J_time_integral,
                               double phi_start, double phi_end) {
    const double l = sign_of(lambda);
    const double root = params.spectral_factor();
    const double dphi = phi_end - phi_start;
    const cplx value = -l * root * J_time_integral + 0.5 * dphi * (1.0 - I * l * params.gamma() / root);
    const double im = -0.5 * l * params.gamma() * dphi / root;
    return AdiabaticPhase{lambda, cplx{value.real(), im}, im, cplx{0.0, im}};
}

double xi_factor(const SystemParams& params, double phi_start, double phi_end) {
    return std::exp(params.gamma() * (phi_end - phi_start) / params.spectral_factor());
}

Populations adiabatic_populations(double p0, const SystemParams& params, double phi_start, double phi_end) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw DomainError("initial population p0 must lie in (0, 1)");
    }
    const double xi = xi_factor(params, phi_start, phi_end);
    return Populations{p0 * xi, (1.0 - p0) / xi};
}

AdiabaticityMargin adiabaticity_margin(const SystemParams& params, double omega, double J) {
    if (!(J > 0.0)) {
        throw DomainError("J must be positive");
    }
    const double gap = 1.0 - params.gamma() * params.gamma();
    const double phi_dot = omega * J;
    return AdiabaticityMargin{std::abs(phi_dot / (4.0 * J * gap)), std::abs(omega / gap)};
}

double omega_for_margin(const SystemParams& params, double reduced_margin, double direction) {
    const double gap = 1.0 - params.gamma() * params.gamma();
    return std::copysign(reduced_margin * gap, direction);
}

double evolved_population_weight(const SystemParams& params, const Matrix2& U, Branch lambda, double phi_start) {
    // J only scales the spectrum; the eigenvectors depend on phi alone.
    const Vector2 psi0 = eigensystem(params, ControlPoint{1.0, phi_start}).normalized_psi(lambda);
    return (U * psi0).squaredNorm();
}

double population_envelope_error(const SystemParams& params, const DriveSegment& segment, Branch lambda,
                                 int samples_per_period) {
    if (samples_per_period < 2) {
        throw DomainError("samples_per_period must be at least 2");
    }
    const double bohr_period = std::numbers::pi / params.spectral_factor();
    const double length = std::abs(segment.tau);
    const auto samples = std::max<long>(
        2, static_cast<long>(std::ceil(length / bohr_period * samples_per_period)));
    const Vector2 psi0 =
        eigensystem(params, ControlPoint{1.0, segment.phi_start}).normalized_psi(lambda);

    double worst = 0.0;
    for (long n = 1; n <= samples; ++n) {
        const double tau = segment.tau * static_cast<double>(n) / static_cast<double>(samples);
        const Matrix2 U = exact_propagator(params, segment.omega, tau, segment.phi_start);
        const double weight = (U * psi0).squaredNorm();
        const double phi = segment.phi_start + segment.omega * tau;
        const double target = std::exp(-2.0 * adiabatic_phase(params, lambda, 0.0, segment.phi_start, phi).im_part);
        worst = std::max(worst, std::abs(weight - target) / target);
    }
    return worst;
}

}  // namespace nhqhe
