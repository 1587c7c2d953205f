#include "nhqhe/cycle.hpp"

#include "nhqhe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nhqhe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 2J / (kB L), with L = 0 read as an infinite temperature.
Temperature temperature_from_log(double two_J, double kB, double log_ratio) {
    if (std::abs(log_ratio) <= 8.0 * std::numeric_limits<double>::epsilon()) {
        return Temperature{std::numeric_limits<double>::infinity(), true};
    }
    return Temperature{two_J / (kB * log_ratio), false};
}

double temperature_difference(const Temperature& to, const Temperature& from) {
    if (to.infinite || from.infinite) {
        return kNaN;
    }
    return to.value - from.value;
}

// Raw energies are the rescaled closed forms times sqrt(1 - gamma^2).
double energy_unit(const OttoSpec& spec, Units units) {
    return units == Units::raw ? spec.params.spectral_factor() : 1.0;
}

ThermoObservables rescale(ThermoObservables obs, double factor) {
    if (!obs.T.infinite) {
        obs.T.value *= factor;
    }
    obs.U *= factor;
    obs.eps_plus *= factor;
    return obs;
}

ControlPath single_leg(PlanePoint from, PlanePoint to, const char* label) {
    return ControlPath({line_segment(from, to, label)}, false);
}

ProcessRecord negated(const ProcessRecord& p, std::string leg) {
    return ProcessRecord{std::move(leg), p.kind, -p.dT, -p.dU, -p.dQ, -p.dW, -p.dS};
}

const char* kIsospectrum = "isospectrum";
const char* kNoHeat = "adiabatic (no heat)";

}  // namespace

void OttoSpec::validate() const {
    if (!(J2 > 0.0) || !(J1 > J2) || !std::isfinite(J1)) {
        throw DomainError("Otto cycle requires J1 > J2 > 0");
    }
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw DomainError("initial population p0 must lie in (0, 1)");
    }
    if (!std::isfinite(phi1) || !std::isfinite(phi2)) {
        throw DomainError("phi1 and phi2 must be finite");
    }
    if (phi1 == phi2) {
        throw DomainError("Otto cycle requires phi2 != phi1");
    }
}

double OttoSpec::xi() const { return xi_factor(params, phi1, phi2); }

Corners corner_closed_forms(const OttoSpec& spec, Units units) {
    spec.validate();
    const double kB = spec.params.kB();
    const double p0 = spec.p0;
    const double xi = spec.xi();
    const double L = std::log(1.0 / p0 - 1.0);
    const double LB = std::log((1.0 / p0 - 1.0) * std::pow(xi, -2.0));
    const double unit = energy_unit(spec, units);
    const double Z = partition_Z(p0);

    const double S_ad = -kB * p0 * std::log(p0) - kB * (1.0 - p0) * std::log(1.0 - p0);
    const double S_bc = -kB * p0 * xi * std::log(p0 * xi) - kB * (1.0 - p0) / xi * std::log((1.0 - p0) / xi);

    auto row_ad = [&](char label, double J, double phi) {
        const ThermoObservables obs{temperature_from_log(2.0 * J, kB, L), J * (2.0 * p0 - 1.0), S_ad, Z, J, p0,
                                    1.0 - p0};
        return CornerState{label, J, phi, rescale(obs, unit)};
    };
    auto row_bc = [&](char label, double J, double phi) {
        const ThermoObservables obs{temperature_from_log(2.0 * J, kB, LB),
                                    p0 * (xi + 1.0 / xi) * J - J / xi,
                                    S_bc,
                                    Z,
                                    J,
                                    p0 * xi,
                                    (1.0 - p0) / xi};
        return CornerState{label, J, phi, rescale(obs, unit)};
    };
    return Corners{row_ad('A', spec.J1, spec.phi1), row_bc('B', spec.J1, spec.phi2),
                   row_bc('C', spec.J2, spec.phi2), row_ad('D', spec.J2, spec.phi1)};
}

Processes process_closed_forms(const OttoSpec& spec, Units units) {
    spec.validate();
    const double kB = spec.params.kB();
    const double p0 = spec.p0;
    const double J1 = spec.J1;
    const double J2 = spec.J2;
    const double xi = spec.xi();
    const double ln_xi = std::log(xi);
    const double L = std::log(1.0 / p0 - 1.0);
    const double LB = std::log((1.0 / p0 - 1.0) * std::pow(xi, -2.0));
    const double unit = energy_unit(spec, units);
    const bool finite_A = std::abs(L) > 8.0 * std::numeric_limits<double>::epsilon();
    const bool finite_B = std::abs(LB) > 8.0 * std::numeric_limits<double>::epsilon();

    // ln(p0^(xi-1) xi^xi) and ln[(1-p0)^(1/xi-1) (1/xi)^(1/xi)], expanded.
    const double log_a = (xi - 1.0) * std::log(p0) + xi * ln_xi;
    const double log_b = (1.0 / xi - 1.0) * std::log(1.0 - p0) - ln_xi / xi;
    const double dS_ab = -kB * p0 * log_a - kB * (1.0 - p0) * log_b;

    const double dU_ab = p0 * (xi + 1.0 / xi - 2.0) * J1 + (1.0 - 1.0 / xi) * J1;
    const double dU_bc = p0 * (xi + 1.0 / xi) * (J2 - J1) - (J2 - J1) / xi;
    const double dU_cd = -p0 * (xi + 1.0 / xi - 2.0) * J2 - (1.0 - 1.0 / xi) * J2;
    const double dU_da = (J1 - J2) * (2.0 * p0 - 1.0);

    const double dT_ab = finite_A && finite_B ? 4.0 * J1 * ln_xi / (kB * LB * L) : kNaN;
    const double dT_bc = finite_B ? 2.0 * (J2 - J1) / (kB * LB) : kNaN;
    const double dT_cd = finite_A && finite_B ? -4.0 * J2 * ln_xi / (kB * LB * L) : kNaN;
    const double dT_da = finite_A ? 2.0 * (J1 - J2) / (kB * L) : kNaN;

    return Processes{
        ProcessRecord{"A->B", kIsospectrum, unit * dT_ab, unit * dU_ab, unit * dU_ab, 0.0, dS_ab},
        ProcessRecord{"B->C", kNoHeat, unit * dT_bc, unit * dU_bc, 0.0, unit * dU_bc, 0.0},
        ProcessRecord{"C->D", kIsospectrum, unit * dT_cd, unit * dU_cd, unit * dU_cd, 0.0, -dS_ab},
        ProcessRecord{"D->A", kNoHeat, unit * dT_da, unit * dU_da, 0.0, unit * dU_da, 0.0},
    };
}

Corners otto_corner_states(const OttoSpec& spec, Units units) {
    spec.validate();
    const Preparation prep = spec.preparation();
    const double unit = units == Units::raw ? 1.0 : 1.0 / spec.params.spectral_factor();
    auto corner = [&](char label, double J, double phi) {
        const MixedState st = prepare_state(spec.params, prep, ControlPoint{J, phi});
        return CornerState{label, J, phi, rescale(observables(st, spec.params), unit)};
    };
    return Corners{corner('A', spec.J1, spec.phi1), corner('B', spec.J1, spec.phi2),
                   corner('C', spec.J2, spec.phi2), corner('D', spec.J2, spec.phi1)};
}

Processes otto_process_deltas(const OttoSpec& spec, Units units, double tol) {
    spec.validate();
    const Corners corners = otto_corner_states(spec, units);
    const Preparation prep = spec.preparation();
    const double unit = units == Units::raw ? 1.0 : 1.0 / spec.params.spectral_factor();
    const std::array<PlanePoint, 4> pts{PlanePoint{spec.J1, spec.phi1}, PlanePoint{spec.J1, spec.phi2},
                                        PlanePoint{spec.J2, spec.phi2}, PlanePoint{spec.J2, spec.phi1}};
    const std::array<const char*, 4> labels{"A->B", "B->C", "C->D", "D->A"};

    Processes out;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t next = (k + 1) % 4;
        const ControlPath leg = single_leg(pts[k], pts[next], labels[k]);
        const double dQ = heat_line_integral(leg, prep, spec.params, tol) * unit;
        const double dW = work_line_integral(leg, prep, spec.params, tol) * unit;
        const double dS = entropy_change_line_integral(leg, prep, spec.params, tol);
        out[k] = ProcessRecord{labels[k],
                               k % 2 == 0 ? kIsospectrum : kNoHeat,
                               temperature_difference(corners[next].obs.T, corners[k].obs.T),
                               dQ + dW,
                               dQ,
                               dW,
                               dS};
    }
    return out;
}

double otto_efficiency(const OttoSpec& spec, double tol) {
    spec.validate();
    const Preparation prep = spec.preparation();
    const double Q2 = heat_line_integral(
        single_leg({spec.J1, spec.phi1}, {spec.J1, spec.phi2}, "A->B"), prep, spec.params, tol);
    const double Q1 = heat_line_integral(
        single_leg({spec.J2, spec.phi2}, {spec.J2, spec.phi1}, "C->D"), prep, spec.params, tol);
    if (std::abs(Q2) <= 1e-14 * spec.J1 * spec.params.spectral_factor()) {
        throw NumericalError("efficiency undefined: no heat absorbed on the J1 isospectrum leg (xi = 1)");
    }
    return (Q1 + Q2) / Q2;
}

double otto_efficiency_closed_form(const OttoSpec& spec) {
    spec.validate();
    return 1.0 - spec.J2 / spec.J1;
}

LoopTotals generic_loop_report(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                               double tol) {
    if (!path.closed()) {
        throw DomainError("loop report requires a closed path");
    }
    LoopTotals t{};
    t.dQ = heat_line_integral(path, prep, params, tol);
    t.dW = work_line_integral(path, prep, params, tol);
    t.dU = t.dQ + t.dW;
    t.dS = entropy_line_integral(path, prep, params, tol);
    t.dS_state = entropy_change_line_integral(path, prep, params, tol);
    t.energy_scale = path.max_J() * params.spectral_factor();
    const double bound = 1e-9 * t.energy_scale;
    t.closed_ok = std::abs(t.dU) <= bound && std::abs(t.dS) <= bound && std::abs(t.dS_state) <= bound;
    return t;
}

CycleReport otto_cycle_report(const OttoSpec& spec, Orientation orientation, Units units, double tol) {
    spec.validate();
    CycleReport report{};
    report.orientation = orientation;
    report.corners = otto_corner_states(spec, units);
    const Processes fwd = otto_process_deltas(spec, units, tol);

    const PlanePoint a{spec.J1, spec.phi1}, b{spec.J1, spec.phi2}, c{spec.J2, spec.phi2}, d{spec.J2, spec.phi1};
    std::vector<PlanePoint> loop;
    if (orientation == Orientation::forward) {
        report.processes = fwd;
        loop = {a, b, c, d};
    } else {
        report.processes = Processes{negated(fwd[3], "A->D"), negated(fwd[2], "D->C"), negated(fwd[1], "C->B"),
                                     negated(fwd[0], "B->A")};
        loop = {a, d, c, b};
    }
    report.totals = generic_loop_report(polyline(loop, true), spec.preparation(), spec.params, tol);
    if (units == Units::sqrt_factor) {
        const double f = 1.0 / spec.params.spectral_factor();
        report.totals.dQ *= f;
        report.totals.dW *= f;
        report.totals.dU *= f;
        report.totals.energy_scale *= f;
    }

    // Heat on the J1 isospectrum leg plays Q2, heat on the J2 leg plays Q1.
    const bool fw = orientation == Orientation::forward;
    const double Q2 = fw ? report.processes[0].dQ : report.processes[3].dQ;
    const double Q1 = fw ? report.processes[2].dQ : report.processes[1].dQ;
    report.efficiency = Q2 != 0.0 ? (Q1 + Q2) / Q2 : kNaN;
    return report;
}

TemperatureRange corner_temperature_range(const Corners& corners) {
    TemperatureRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& c : corners) {
        if (c.obs.T.infinite) {
            continue;
        }
        r.T_min = std::min(r.T_min, c.obs.T.value);
        r.T_max = std::max(r.T_max, c.obs.T.value);
    }
    return r;
}

std::array<DriveSegment, 4> otto_drive(const OttoSpec& spec, double reduced_margin, double level_leg_tau) {
    spec.validate();
    if (!(reduced_margin > 0.0)) {
        throw DomainError("adiabaticity margin must be positive");
    }
    const double dphi = spec.phi2 - spec.phi1;
    const double omega = omega_for_margin(spec.params, reduced_margin, dphi);
    const double tau = dphi / omega;
    return {DriveSegment{omega, tau, spec.phi1}, DriveSegment{0.0, level_leg_tau, spec.phi2},
            DriveSegment{-omega, tau, spec.phi2}, DriveSegment{0.0, level_leg_tau, spec.phi1}};
}

std::array<Populations, 4> otto_exact_corner_populations(const OttoSpec& spec, double reduced_margin) {
    const auto drive = otto_drive(spec, reduced_margin);
    std::array<Populations, 4> out{};
    Matrix2 U = Matrix2::Identity();
    for (std::size_t k = 0; k < drive.size(); ++k) {
        U = compose_segments(std::span(drive).subspan(k, 1), spec.params).U * U;
        out[k] = Populations{spec.p0 * evolved_population_weight(spec.params, U, Branch::plus, spec.phi1),
                             (1.0 - spec.p0) * evolved_population_weight(spec.params, U, Branch::minus, spec.phi1)};
    }
    return out;
}

double otto_adiabatic_error(const OttoSpec& spec, double reduced_margin) {
    double worst = 0.0;
    for (const DriveSegment& seg : otto_drive(spec, reduced_margin)) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            worst = std::max(worst, population_envelope_error(spec.params, seg, b));
        }
    }
    return worst;
}

}  // namespace nhqhe
