// cycle.hpp: the four-corner variable-mass Otto cycle A -> B -> C -> D -> A.
//
//   A (J1, phi1) -> B (J1, phi2)   isospectrum: phi sweep, populations change
//   B (J1, phi2) -> C (J2, phi2)   level change at fixed populations
//   C (J2, phi2) -> D (J2, phi1)   isospectrum
//   D (J2, phi1) -> A (J1, phi1)   level change
//
// Every leg is quantum-adiabatic (no inter-level transitions); the "adiabatic"
// label on B->C and D->A refers to the absence of heat exchange.
//
// Each quantity is available two ways: the closed-form expressions
// (corner_closed_forms / process_closed_forms) and the pipeline built from adiabatic populations,
// thermo state functions and line integrals (otto_corner_states /
// otto_process_deltas). The two are compared by the test suites.

#pragma once

#include "nhqhe/evolve.hpp"
#include "nhqhe/model.hpp"
#include "nhqhe/path.hpp"
#include "nhqhe/thermo.hpp"

#include <array>
#include <string>

namespace nhqhe {

struct OttoSpec {
    double J1;
    double J2;
    double phi1;
    double phi2;
    double p0;
    SystemParams params;

    // Throws DomainError unless J1 > J2 > 0, 0 < p0 < 1 and phi2 != phi1.
    void validate() const;
    double xi() const;
    Preparation preparation() const { return Preparation{p0, phi1}; }
};

struct CornerState {
    char label;
    double J;
    double phi;
    ThermoObservables obs;
};

using Corners = std::array<CornerState, 4>;

struct ProcessRecord {
    std::string leg;
    std::string kind;  // "isospectrum" or "adiabatic (no heat)"
    double dT;         // NaN when either end has infinite temperature
    double dU;
    double dQ;
    double dW;
    double dS;
};

using Processes = std::array<ProcessRecord, 4>;

// Energies and temperatures can be reported in units of sqrt(1 - gamma^2);
// entropies and populations are unchanged.
enum class Units { raw, sqrt_factor };

// Closed-form corner and process rows.
Corners corner_closed_forms(const OttoSpec& spec, Units units = Units::raw);
Processes process_closed_forms(const OttoSpec& spec, Units units = Units::raw);

// Pipeline: corner states from the adiabatic populations and thermo functions.
Corners otto_corner_states(const OttoSpec& spec, Units units = Units::raw);

// Pipeline: per-leg heat, work and entropy from line integrals along the
// rectangle; dU = dQ + dW; dT from the end-point temperatures.
Processes otto_process_deltas(const OttoSpec& spec, Units units = Units::raw, double tol = kDefaultQuadratureTol);

// eta = (Q1 + Q2) / Q2 with Q2 = heat on A->B (at J1) and Q1 = heat on C->D
// (at J2), both from quadrature. Throws NumericalError if Q2 vanishes.
double otto_efficiency(const OttoSpec& spec, double tol = kDefaultQuadratureTol);
double otto_efficiency_closed_form(const OttoSpec& spec);

enum class Orientation { forward, reversed };

struct LoopTotals {
    double dU;
    double dQ;
    double dW;
    double dS;           // Clausius integral of dQ/T
    double dS_state;     // integral of the Gibbs entropy differential
    double energy_scale; // max |eps_+| on the loop
    bool closed_ok;      // |dU|, |dS| within tolerance of zero
};

struct CycleReport {
    Corners corners;
    Processes processes;  // in traversal order
    LoopTotals totals;
    double efficiency;
    Orientation orientation;
};

// Forward traversal runs the engine; reversed runs A -> D -> C -> B -> A and
// flips the sign of every process delta.
CycleReport otto_cycle_report(const OttoSpec& spec, Orientation orientation = Orientation::forward,
                              Units units = Units::raw, double tol = kDefaultQuadratureTol);

// Totals of an arbitrary closed loop from the thermo line integrals. Throws
// DomainError for open paths.
LoopTotals generic_loop_report(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                               double tol = kDefaultQuadratureTol);

// Extreme corner temperatures (finite corners only).
struct TemperatureRange {
    double T_min;
    double T_max;
};
TemperatureRange corner_temperature_range(const Corners& corners);

// --- exact dynamics of the cycle ---------------------------------------------

// The cycle as four constant-rate legs in rescaled time. The phi legs sweep at
// the given reduced adiabaticity margin; the J legs have rate zero and span
// `level_leg_tau` (they are exact at any speed because H(tau)/J is frozen).
std::array<DriveSegment, 4> otto_drive(const OttoSpec& spec, double reduced_margin, double level_leg_tau = 1.0);

// Dirac populations at B, C, D and back at A from the composed exact
// propagators, starting from the closed-form populations at A.
std::array<Populations, 4> otto_exact_corner_populations(const OttoSpec& spec, double reduced_margin);

// Largest relative population error of exact evolution against the adiabatic
// closed-form values over all four processes, both branches. Each process starts
// from its closed-form state at the initial corner; the error is the envelope over
// the process.
double otto_adiabatic_error(const OttoSpec& spec, double reduced_margin);

}  // namespace nhqhe
