#include "nhqhe/model.hpp"

#include "nhqhe/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nhqhe {

namespace {

constexpr cplx I{0.0, 1.0};

void require_unbroken(double gamma) {
    if (!std::isfinite(gamma)) {
        throw DomainError("gamma must be finite");
    }
    if (std::abs(gamma) >= 1.0) {
        throw DomainError("|gamma| = " + std::to_string(std::abs(gamma)) +
                          " >= 1: exceptional point or broken PT phase");
    }
}

}  // namespace

SystemParams::SystemParams(double gamma, double kB) : gamma_(gamma), kB_(kB) {
    require_unbroken(gamma);
    if (!(kB > 0.0) || !std::isfinite(kB)) {
        throw DomainError("kB must be positive and finite");
    }
    spectral_factor_ = std::sqrt(1.0 - gamma * gamma);
}

ControlPoint::ControlPoint(double J_, double phi_) : J(J_), phi(phi_) {
    if (!(J_ > 0.0) || !std::isfinite(J_)) {
        throw DomainError("J must be positive and finite (got " + std::to_string(J_) + ")");
    }
    if (!std::isfinite(phi_)) {
        throw DomainError("phi must be finite");
    }
}

cplx theta_of_gamma(double gamma) {
    require_unbroken(gamma);
    return cplx{std::numbers::pi / 2.0, -std::atanh(gamma)};
}

cplx theta_of_gamma(const SystemParams& params) { return theta_of_gamma(params.gamma()); }

Matrix2 pauli_x() {
    Matrix2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix2 pauli_y() {
    Matrix2 m;
    m << 0.0, -I, I, 0.0;
    return m;
}

Matrix2 pauli_z() {
    Matrix2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix2 build_hamiltonian(const SystemParams& params, const ControlPoint& pt) {
    const cplx theta = theta_of_gamma(params);
    const cplx c = std::cos(theta);
    const cplx s = std::sin(theta);
    const cplx phase = std::polar(1.0, pt.phi);
    Matrix2 h;
    h << c, s * phase, s * std::conj(phase), -c;
    return pt.J * params.spectral_factor() * h;
}

Matrix2 field_hamiltonian(const SystemParams& params, const ControlPoint& pt) {
    const double bx = pt.J * std::cos(pt.phi);
    const double by = -pt.J * std::sin(pt.phi);
    const cplx bz = I * params.gamma() * pt.J;
    return bx * pauli_x() + by * pauli_y() + bz * pauli_z();
}

double pt_defect(const Matrix2& H) {
    const Matrix2 p = pauli_x();
    return (p * H.conjugate() * p - H).norm();
}

Vector2 EigenSystem::normalized_psi(Branch b) const {
    return psi(b) / std::sqrt(dirac_norm_theta);
}

EigenSystem eigensystem(const SystemParams& params, const ControlPoint& pt) {
    const cplx half = theta_of_gamma(params) / 2.0;
    const cplx c = std::cos(half);
    const cplx s = std::sin(half);
    const cplx e_minus = std::polar(1.0, -pt.phi);
    const cplx e_plus = std::polar(1.0, pt.phi);

    EigenSystem es;
    es.eps_plus = level_energy(params, Branch::plus, pt.J);
    es.eps_minus = level_energy(params, Branch::minus, pt.J);
    es.psi_plus << c, s * e_minus;
    es.psi_minus << -s, c * e_minus;
    es.eta_plus << std::conj(c), std::conj(s * e_plus);
    es.eta_minus << std::conj(-s), std::conj(c * e_plus);
    es.dirac_norm_theta = std::norm(c) + std::norm(s);
    return es;
}

double level_energy(const SystemParams& params, Branch b, double J) noexcept {
    return sign_of(b) * J * params.spectral_factor();
}

Vector2 dirac_normalize(const Vector2& state) {
    const double n = state.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("cannot Dirac-normalize a zero or non-finite vector");
    }
    return state / n;
}

cplx bracket(const Vector2& left, const Vector2& right) { return left.dot(right); }

}  // namespace nhqhe
