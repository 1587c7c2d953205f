#include "nhqhe/classical.hpp"

#include "nhqhe/errors.hpp"

#include <cmath>

namespace nhqhe {

void GasState::validate() const {
    if (!(N > 0.0) || !(T > 0.0) || !(V > 0.0) || !(cV > 0.0)) {
        throw DomainError("gas state requires N, T, V, cV > 0");
    }
    if (!std::isfinite(S / N)) {
        throw DomainError("entropy per particle must be finite");
    }
}

HeatStep isothermal_add(const GasState& state, double x) {
    state.validate();
    if (!(x >= 0.0)) {
        throw DomainError("added fraction must be non-negative");
    }
    GasState next = state;
    next.N *= 1.0 + x;
    next.V *= 1.0 + x;
    next.S *= 1.0 + x;
    const double dS = x * state.S;
    return HeatStep{next, state.T * dS, dS};
}

WorkStep adiabatic_expand(const GasState& state, double T_target, double kB) {
    state.validate();
    if (!(T_target > 0.0) || T_target > state.T) {
        throw DomainError("adiabatic expansion must cool the gas");
    }
    GasState next = state;
    next.V = state.V * std::pow(state.T / T_target, state.cV);
    next.T = T_target;
    return WorkStep{next, state.N * state.cV * kB * (state.T - T_target)};
}

HeatStep isothermal_remove(const GasState& state, double target_S) {
    state.validate();
    if (!(target_S > 0.0)) {
        throw DomainError("removal would take out all of the gas");
    }
    if (target_S > state.S) {
        throw DomainError("isothermal removal must lower the entropy");
    }
    const double keep = target_S / state.S;
    GasState next = state;
    next.N *= keep;
    next.V *= keep;
    next.S = target_S;
    const double dS = state.S - target_S;
    return HeatStep{next, state.T * dS, dS};
}

WorkStep adiabatic_compress(const GasState& state, double T_target, double kB) {
    state.validate();
    if (!(T_target >= state.T)) {
        throw DomainError("adiabatic compression must heat the gas");
    }
    GasState next = state;
    next.V = state.V * std::pow(state.T / T_target, state.cV);
    next.T = T_target;
    return WorkStep{next, state.N * state.cV * kB * (T_target - state.T)};
}

void ClassicalSpec::validate() const {
    if (!(T2 > 0.0) || !(T1 > T2)) {
        throw DomainError("classical cycle requires T1 > T2 > 0");
    }
    if (!(add_fraction > 0.0)) {
        throw DomainError("added fraction must be positive");
    }
    if (!(kB > 0.0)) {
        throw DomainError("kB must be positive");
    }
    initial.validate();
    if (!(initial.S > 0.0)) {
        throw DomainError("initial entropy must be positive for heat to flow in with the gas");
    }
    if (std::abs(initial.T - T1) > 1e-12 * T1) {
        throw DomainError("initial gas state must be at the hot temperature T1");
    }
}

ClassicalReport classical_cycle(const ClassicalSpec& spec) {
    spec.validate();
    GasState start = spec.initial;
    start.T = spec.T1;

    const HeatStep add = isothermal_add(start, spec.add_fraction);
    const WorkStep expand = adiabatic_expand(add.state, spec.T2, spec.kB);
    const HeatStep remove = isothermal_remove(expand.state, start.S);
    const WorkStep compress = adiabatic_compress(remove.state, spec.T1, spec.kB);

    ClassicalReport r{};
    r.Q1 = add.Q;
    r.Q2 = remove.Q;
    r.W_net = r.Q1 - r.Q2;
    r.W_expand = expand.W;
    r.W_compress = compress.W;
    r.W_mech = expand.W - compress.W;
    const double moved_in = add.state.N - start.N;
    const double moved_out = expand.state.N - remove.state.N;
    r.E_in = moved_in * start.cV * spec.kB * spec.T1;
    r.E_out = moved_out * start.cV * spec.kB * spec.T2;
    r.dS_in = add.dS;
    r.dS_out = remove.dS;
    r.efficiency = r.W_net / r.Q1;
    r.after_add = add.state;
    r.after_expand = expand.state;
    r.after_remove = remove.state;
    r.final_state = compress.state;
    return r;
}

}  // namespace nhqhe
