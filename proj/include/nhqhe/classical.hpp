// classical.hpp: variable-mass ideal-gas cycle that transfers heat together
// with gas: isothermal addition at T1, adiabatic expansion to T2, isothermal
// removal at T2, adiabatic compression back to T1.
//
// Entropy per particle (units of kB): s = s0 + cV ln T + ln(V / N), with s0 a
// constant that cancels in every difference. Gas moved at fixed temperature
// and density carries heat Q = T dS.

#pragma once

namespace nhqhe {

struct GasState {
    double N;         // particle number (continuous)
    double T;
    double V;
    double S;         // total entropy
    double cV = 1.5;  // heat capacity per particle in units of kB

    void validate() const;
};

struct HeatStep {
    GasState state;
    double Q;   // heat carried by the transferred gas
    double dS;  // entropy carried by the transferred gas
};

struct WorkStep {
    GasState state;
    double W;  // mechanical work (by the gas on expansion, on the gas on compression)
};

// Add a fraction x of gas at the state's temperature and density.
HeatStep isothermal_add(const GasState& state, double x);

// Reversible adiabat down to T_target < T; N and S fixed, V scales as (T/T_target)^cV.
WorkStep adiabatic_expand(const GasState& state, double T_target, double kB = 1.0);

// Remove gas at fixed temperature and density until the entropy is target_S.
HeatStep isothermal_remove(const GasState& state, double target_S);

// Reversible adiabat up to T_target > T.
WorkStep adiabatic_compress(const GasState& state, double T_target, double kB = 1.0);

struct ClassicalSpec {
    double T1;
    double T2;
    double add_fraction;
    GasState initial;  // must sit at T1
    double kB = 1.0;

    void validate() const;
};

struct ClassicalReport {
    double Q1;       // heat in with the gas added at T1
    double Q2;       // heat out with the gas removed at T2
    double W_net;    // Q1 - Q2
    double W_expand;    // work done by the gas on the hot-to-cold adiabat
    double W_compress;  // work done on the gas on the cold-to-hot adiabat
    double W_mech;      // W_expand - W_compress
    double E_in;     // internal energy carried in by the added gas
    double E_out;    // internal energy carried out by the removed gas
    double dS_in;
    double dS_out;
    double efficiency;
    GasState after_add;
    GasState after_expand;
    GasState after_remove;
    GasState final_state;
};

ClassicalReport classical_cycle(const ClassicalSpec& spec);

}  // namespace nhqhe
