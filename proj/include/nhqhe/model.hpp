// model.hpp: PT-symmetric two-level Hamiltonian and its biorthonormal eigensystem.
//
// The spin-1/2 sits in the complex field B = (J cos phi, -J sin phi, i gamma J),
// H = B . sigma. Everything here is closed form; natural units with hbar = 1.

#pragma once

#include <Eigen/Core>

#include <complex>

namespace nhqhe {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

// Level label lambda = +1 (upper) or -1 (lower).
enum class Branch : int { plus = 1, minus = -1 };

constexpr double sign_of(Branch b) noexcept { return static_cast<double>(static_cast<int>(b)); }

// Non-Hermiticity strength gamma and the Boltzmann constant. Construction
// enforces the unbroken-PT domain |gamma| < 1 and kB > 0.
class SystemParams {
public:
    explicit SystemParams(double gamma, double kB = 1.0);

    double gamma() const noexcept { return gamma_; }
    double kB() const noexcept { return kB_; }
    // sqrt(1 - gamma^2): the factor relating J to the level energy.
    double spectral_factor() const noexcept { return spectral_factor_; }

private:
    double gamma_;
    double kB_;
    double spectral_factor_;
};

// A point (J, phi) of the control plane. J > 0 is required.
struct ControlPoint {
    double J;
    double phi;

    ControlPoint(double J_, double phi_);
};

// theta with cos(theta) = i gamma / sqrt(1 - gamma^2) on the branch
// theta = pi/2 - i artanh(gamma), so that sin(theta) = 1/sqrt(1 - gamma^2) > 0.
cplx theta_of_gamma(double gamma);
cplx theta_of_gamma(const SystemParams& params);

// Explicit matrix form J sqrt(1-g^2) [[cos t, sin t e^{i phi}], [sin t e^{-i phi}, -cos t]].
Matrix2 build_hamiltonian(const SystemParams& params, const ControlPoint& pt);

// The same operator assembled as B . sigma from the field components.
Matrix2 field_hamiltonian(const SystemParams& params, const ControlPoint& pt);

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();

// Frobenius norm of (PT) H (PT)^-1 - H with P = sigma_x and T complex conjugation.
double pt_defect(const Matrix2& H);

struct EigenSystem {
    double eps_plus;
    double eps_minus;
    Vector2 psi_plus;   // right eigenvectors of H (raw, biorthonormal scaling)
    Vector2 psi_minus;
    Vector2 eta_plus;   // right eigenvectors of H^dagger, i.e. left eigenvectors of H
    Vector2 eta_minus;
    double dirac_norm_theta;  // |cos(theta/2)|^2 + |sin(theta/2)|^2 = 1/sqrt(1-g^2)

    double energy(Branch b) const noexcept { return b == Branch::plus ? eps_plus : eps_minus; }
    const Vector2& psi(Branch b) const noexcept { return b == Branch::plus ? psi_plus : psi_minus; }
    const Vector2& eta(Branch b) const noexcept { return b == Branch::plus ? eta_plus : eta_minus; }
    // psi_lambda / sqrt(Theta): unit Dirac norm, used for density matrices.
    Vector2 normalized_psi(Branch b) const;
};

EigenSystem eigensystem(const SystemParams& params, const ControlPoint& pt);

// Level energy lambda J sqrt(1 - gamma^2).
double level_energy(const SystemParams& params, Branch b, double J) noexcept;

// Rescale to unit Dirac norm. Throws DomainError for the zero vector.
Vector2 dirac_normalize(const Vector2& state);

// Biorthogonal bracket <left|right> (conjugate-linear in the first slot).
cplx bracket(const Vector2& left, const Vector2& right);

}  // namespace nhqhe
