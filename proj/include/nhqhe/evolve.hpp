// evolve.hpp: time evolution under H(t): closed-form propagators for linear
// phi sweeps, a time-ordered stepwise oracle, and the adiabatic-phase picture.
//
// Closed forms work in the rescaled time tau = int J dt, in which only the
// sweep rate omega = d phi / d tau enters.

#pragma once

#include "nhqhe/model.hpp"

#include <functional>
#include <span>
#include <vector>

namespace nhqhe {

// Threshold on the reduced margin |omega / (1 - gamma^2)| below which a sweep
// is reported as adiabatic by the CLI.
inline constexpr double kDefaultAdiabaticThreshold = 1e-3;

// One leg with phi(tau) = phi_start + omega * tau for tau in [0, tau]. The J
// profile of the leg only enters through tau.
struct DriveSegment {
    double omega = 0.0;
    double tau = 0.0;
    double phi_start = 0.0;

    double phi_end() const noexcept { return phi_start + omega * tau; }
};

struct PropagatorPair {
    Matrix2 U;        // right propagator, T exp(-i int H dt)
    Matrix2 U_tilde;  // left propagator, T exp(-i int H^dagger dt)

    // ||U_tilde^dagger U - 1||_F
    double biorthonormal_defect() const;
};

// Right propagator of a linear sweep. omega and tau may be any finite values
// (negative tau runs the leg backwards).
Matrix2 exact_propagator(const SystemParams& params, double omega, double tau, double phi_start = 0.0);

// Propagator for H^dagger: Omega and Delta replaced by their conjugates.
Matrix2 left_propagator(const SystemParams& params, double omega, double tau, double phi_start = 0.0);

// ||U_tilde^dagger U - 1||_F for one linear sweep, with both closed forms and
// the product evaluated in 50-digit arithmetic. Strongly amplifying sweeps
// have entries of size e^{Im(Omega) tau}, which defeats a double-precision
// check of the identity.
double biorthonormal_defect_extended(const SystemParams& params, double omega, double tau, double phi_start = 0.0);

// Time-ordered product of per-segment propagators. Throws DomainError when
// consecutive segments are not contiguous in phi.
PropagatorPair compose_segments(std::span<const DriveSegment> segments, const SystemParams& params);

// Arbitrary drive in original time t in [t_start, t_end].
struct TimedPath {
    std::function<double(double)> J;
    std::function<double(double)> phi;
    double t_start = 0.0;
    double t_end = 0.0;
};

enum class Side { right, left };

// Midpoint-sampled ordered product of exact 2x2 exponentials exp(-i H(t_mid) dt).
// Second order in dt. Side::left evolves with H^dagger.
Matrix2 stepwise_propagator(const TimedPath& path, double dt, const SystemParams& params,
                            Side side = Side::right);

// Path for a linear sweep at constant J = 1, so that t coincides with tau.
TimedPath linear_sweep_path(double omega, double tau, double phi_start = 0.0);

// exp(A) for a general complex 2x2 matrix.
Matrix2 expm2(const Matrix2& A);

struct AdiabaticPhase {
    Branch lambda;
    cplx value;      // dynamical + complex geometric phase
    double im_part;  // Im(value); the only part the thermodynamics consumes
    cplx truncated;  // i Im(value): the form with the real part dropped
};

AdiabaticPhase adiabatic_phase(const SystemParams& params, Branch lambda, double J_time_integral,
                               double phi_start, double phi_end);

// xi = exp(gamma (phi_end - phi_start) / sqrt(1 - gamma^2)).
double xi_factor(const SystemParams& params, double phi_start, double phi_end);

struct Populations {
    double plus;
    double minus;

    double of(Branch b) const noexcept { return b == Branch::plus ? plus : minus; }
    double total() const noexcept { return plus + minus; }
};

// P+ = p0 xi, P- = (1 - p0) / xi. Requires 0 < p0 < 1.
Populations adiabatic_populations(double p0, const SystemParams& params, double phi_start, double phi_end);

struct AdiabaticityMargin {
    double original_time;  // |phi_dot / (4 J (1 - gamma^2))| with phi_dot = omega J
    double reduced;        // |omega / (1 - gamma^2)|
};

// omega is the sweep rate in rescaled time; J > 0 is the instantaneous coupling.
AdiabaticityMargin adiabaticity_margin(const SystemParams& params, double omega, double J);

// Sweep rate giving the requested reduced margin, with the sign of `direction`.
double omega_for_margin(const SystemParams& params, double reduced_margin, double direction = 1.0);

// Largest relative deviation of the exactly evolved Dirac population of branch
// `lambda` from its adiabatic value exp(-2 Im Lambda) along `segment`. The
// evolution starts from the Dirac-normalized eigenstate at segment.phi_start;
// the result is independent of the initial population. The sampling follows
// the interference between the two levels at `samples_per_period` points per
// Bohr period.
double population_envelope_error(const SystemParams& params, const DriveSegment& segment, Branch lambda,
                                 int samples_per_period = 32);

// Dirac population weight ||U psi_hat||^2 of an evolved, initially
// Dirac-normalized eigenstate of branch lambda at phi_start.
double evolved_population_weight(const SystemParams& params, const Matrix2& U, Branch lambda, double phi_start);

}  // namespace nhqhe
