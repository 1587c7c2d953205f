#include "nhqhe/thermo.hpp"

#include "nhqhe/errors.hpp"
#include "quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace nhqhe {

namespace {

constexpr std::array<Branch, 2> kBranches{Branch::plus, Branch::minus};

void require_prep(const Preparation& prep) {
    if (!(prep.p0 > 0.0 && prep.p0 < 1.0)) {
        throw DomainError("initial population p0 must lie in (0, 1)");
    }
    if (!std::isfinite(prep.phi0)) {
        throw DomainError("reference phase phi0 must be finite");
    }
}

// Populations and their s-derivatives at one sample of a path.
struct LocalState {
    Populations P;
    Populations dP;
};

LocalState local_state(const SystemParams& params, const Preparation& prep, const CurveSample& c) {
    const Populations P = adiabatic_populations(prep.p0, params, prep.phi0, c.phi);
    // d ln xi / dphi
    const double rate = params.gamma() / params.spectral_factor();
    return LocalState{P, Populations{P.plus * rate * c.dphi, -P.minus * rate * c.dphi}};
}

template <class Integrand>
double path_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params, double tol,
                     const char* what, Integrand&& integrand) {
    require_prep(prep);
    double total = 0.0;
    for (const PathSegment& seg : path.segments()) {
        auto f = [&](double s) {
            const CurveSample c = seg.at(s);
            return integrand(c, local_state(params, prep, c));
        };
        total += detail::integrate(f, 0.0, 1.0, tol, std::string(what) + " on segment '" + seg.label + "'");
    }
    return total;
}

// cosh(ln sqrt(1/p0 - 1) - ln xi) times 2 gamma / Z.
double surface_density(const SystemParams& params, const Preparation& prep, double phi) {
    const double a = std::log(std::sqrt(1.0 / prep.p0 - 1.0));
    const double ln_xi = std::log(xi_factor(params, prep.phi0, phi));
    return 2.0 * params.gamma() / partition_Z(prep.p0) * std::cosh(a - ln_xi);
}

}  // namespace

MixedState prepare_state(const SystemParams& params, const Preparation& prep, const ControlPoint& point) {
    require_prep(prep);
    const Populations P = adiabatic_populations(prep.p0, params, prep.phi0, point.phi);
    return MixedState{point, P.plus, P.minus, prep.p0, prep.phi0};
}

Temperature spectral_temperature(const SystemParams& params, double J, double P_plus, double P_minus) {
    if (!(P_plus > 0.0) || !(P_minus > 0.0)) {
        throw DomainError("populations must be positive");
    }
    const double gap = level_energy(params, Branch::plus, J) - level_energy(params, Branch::minus, J);
    const double log_ratio = std::log(P_minus / P_plus);
    if (std::abs(log_ratio) <= 8.0 * std::numeric_limits<double>::epsilon()) {
        return Temperature{std::numeric_limits<double>::infinity(), true};
    }
    return Temperature{gap / (params.kB() * log_ratio), false};
}

Temperature temperature(const MixedState& state, const SystemParams& params) {
    return spectral_temperature(params, state.point.J, state.P_plus, state.P_minus);
}

double internal_energy(const MixedState& state, const SystemParams& params) {
    return state.P_plus * level_energy(params, Branch::plus, state.point.J) +
           state.P_minus * level_energy(params, Branch::minus, state.point.J);
}

double entropy(const MixedState& state, const SystemParams& params) {
    if (!(state.P_plus > 0.0) || !(state.P_minus > 0.0)) {
        throw DomainError("populations must be positive");
    }
    return -params.kB() * (state.P_plus * std::log(state.P_plus) + state.P_minus * std::log(state.P_minus));
}

double partition_Z(double p0) {
    if (!(p0 > 0.0 && p0 < 1.0)) {
        throw DomainError("initial population p0 must lie in (0, 1)");
    }
    return 2.0 * std::cosh(std::log(std::sqrt(1.0 / p0 - 1.0)));
}

ThermoObservables observables(const MixedState& state, const SystemParams& params) {
    return ThermoObservables{temperature(state, params),
                             internal_energy(state, params),
                             entropy(state, params),
                             partition_Z(state.p0),
                             level_energy(params, Branch::plus, state.point.J),
                             state.P_plus,
                             state.P_minus};
}

double heat_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                          double tol) {
    return path_integral(path, prep, params, tol, "heat", [&](const CurveSample& c, const LocalState& st) {
        double dq = 0.0;
        for (Branch b : kBranches) {
            dq += level_energy(params, b, c.J) * st.dP.of(b);
        }
        return dq;
    });
}

double work_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                          double tol) {
    return path_integral(path, prep, params, tol, "work", [&](const CurveSample& c, const LocalState& st) {
        double dw = 0.0;
        for (Branch b : kBranches) {
            dw += st.P.of(b) * level_energy(params, b, c.dJ);
        }
        return dw;
    });
}

double entropy_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                             double tol) {
    return path_integral(path, prep, params, tol, "entropy", [&](const CurveSample& c, const LocalState& st) {
        return params.kB() * std::log(st.P.minus / st.P.plus) * params.gamma() * st.P.total() * c.dphi /
               (2.0 * params.spectral_factor());
    });
}

double entropy_change_line_integral(const ControlPath& path, const Preparation& prep, const SystemParams& params,
                                    double tol) {
    return path_integral(path, prep, params, tol, "entropy change", [&](const CurveSample&, const LocalState& st) {
        double ds = 0.0;
        for (Branch b : kBranches) {
            ds -= (std::log(st.P.of(b)) + 1.0) * st.dP.of(b);
        }
        return params.kB() * ds;
    });
}

double heat_surface_integral(const Rectangle& region, const Preparation& prep, const SystemParams& params,
                             double tol) {
    require_prep(prep);
    auto inner = [&](double J) {
        (void)J;
        return detail::integrate([&](double phi) { return surface_density(params, prep, phi); }, region.phi_lo,
                                 region.phi_hi, tol, "heat surface (phi)");
    };
    return detail::integrate(inner, region.J_lo, region.J_hi, tol, "heat surface (J)");
}

double heat_surface_integral(std::span<const PlanePoint> polygon, const Preparation& prep,
                             const SystemParams& params, double tol) {
    require_prep(prep);
    if (polygon.size() < 3) {
        return 0.0;
    }
    // Fan triangulation; each triangle (p0, pk, pk1) is mapped from the unit
    // square by x = p0 + u[(pk - p0) + v (pk1 - pk)] with Jacobian u * det.
    const PlanePoint& p0 = polygon[0];
    double total = 0.0;
    for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        const PlanePoint& pk = polygon[k];
        const PlanePoint& pk1 = polygon[k + 1];
        const double det = (pk.J - p0.J) * (pk1.phi - p0.phi) - (pk.phi - p0.phi) * (pk1.J - p0.J);
        if (det == 0.0) {
            continue;
        }
        auto outer = [&](double u) {
            auto inner = [&](double v) {
                const double phi = p0.phi + u * ((pk.phi - p0.phi) + v * (pk1.phi - pk.phi));
                return surface_density(params, prep, phi);
            };
            return u * detail::integrate(inner, 0.0, 1.0, tol, "heat surface (v)");
        };
        total += det * detail::integrate(outer, 0.0, 1.0, tol, "heat surface (u)");
    }
    return total;
}

double heat_rectangle_closed_form(const Rectangle& region, const Preparation& prep, const SystemParams& params) {
    require_prep(prep);
    auto primitive = [&](double phi) {
        const double xi = xi_factor(params, prep.phi0, phi);
        return prep.p0 * xi - (1.0 - prep.p0) / xi;
    };
    return (region.J_hi - region.J_lo) * params.spectral_factor() *
           (primitive(region.phi_hi) - primitive(region.phi_lo));
}

}  // namespace nhqhe
