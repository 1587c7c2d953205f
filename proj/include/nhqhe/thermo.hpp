// thermo.hpp: thermodynamics of the adiabatically driven two-level mixture.
//
// A mixture prepared with populations (p0, 1 - p0) at phi0 carries, at any
// later control point, populations P+ = p0 xi and P- = (1 - p0) / xi with
// xi = exp(gamma (phi - phi0) / sqrt(1 - gamma^2)). Temperatures are spectral
// temperatures read off the population ratio; they may be negative or infinite.

#pragma once

#include "nhqhe/evolve.hpp"
#include "nhqhe/model.hpp"
#include "nhqhe/path.hpp"

#include <span>

namespace nhqhe {

inline constexpr double kDefaultQuadratureTol = 1e-10;

// Reference preparation of the mixture.
struct Preparation {
    double p0;
    double phi0;
};

struct MixedState {
    ControlPoint point;
    double P_plus;
    double P_minus;
    double p0;
    double phi0;
};

// State reached from `prep` by an adiabatic path ending at `point`.
MixedState prepare_state(const SystemParams& params, const Preparation& prep, const ControlPoint& point);

// Extended real: `infinite` is set when the population ratio is one, in which
// case `value` holds +inf. Negative values mean population inversion.
struct Temperature {
    double value;
    bool infinite;

    bool negative() const noexcept { return !infinite && value < 0.0; }
};

Temperature spectral_temperature(const SystemParams& params, double J, double P_plus, double P_minus);
Temperature temperature(const MixedState& state, const SystemParams& params);

double internal_energy(const MixedState& state, const SystemParams& params);
double entropy(const MixedState& state, const SystemParams& params);
// Z = 2 cosh(ln sqrt(1/p0 - 1)).
double partition_Z(double p0);

struct ThermoObservables {
    Temperature T;
    double U;
    double S;
    double Z;
    double eps_plus;
    double P_plus;
    double P_minus;
};

ThermoObservables observables(const MixedState& state, const SystemParams& params);

// Sum_lambda eps_lambda dP_lambda along the path (adaptive Gauss-Kronrod per segment).
double heat_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                          double tol = kDefaultQuadratureTol);

// Sum_lambda P_lambda d eps_lambda along the path.
double work_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                          double tol = kDefaultQuadratureTol);

// Clausius integral of dQ / T, evaluated in the regular form
// kB ln(P-/P+) gamma (P+ + P-) dphi / (2 sqrt(1 - gamma^2)), which stays
// finite where T passes through infinity.
double entropy_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                             double tol = kDefaultQuadratureTol);

// Integral of the Gibbs entropy differential dS = -kB Sum (ln P_lambda + 1) dP_lambda.
double entropy_change_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                                    double tol = kDefaultQuadratureTol);

struct Rectangle {
    double J_lo;
    double J_hi;
    double phi_lo;
    double phi_hi;
};

// (2 gamma / Z) double integral of cosh(ln sqrt(1/p0 - 1) - ln xi(phi)) dJ dphi
// by tensor-product adaptive quadrature. The rectangle is positively oriented.
double heat_surface_integral(const Rectangle& region, const Preparation& prep, const SystemParams& params,
                             double tol = kDefaultQuadratureTol);

// Same integrand over a simple polygon; the sign follows the vertex
// orientation (counterclockwise in (J, phi) is positive).
double heat_surface_integral(std::span<const PlanePoint> polygon, const Preparation& prep,
                             const SystemParams& params, double tol = kDefaultQuadratureTol);

// Heat for a counterclockwise rectangle from the exact primitive
// (J_hi - J_lo) sqrt(1 - g^2) [p0 xi - (1 - p0)/xi] between phi_lo and phi_hi.
double heat_rectangle_closed_form(const Rectangle& region, const Preparation& prep, const SystemParams& params);

}  // namespace nhqhe
