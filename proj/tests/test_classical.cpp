#include "nhqhe/classical.hpp"
#include "nhqhe/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nhqhe;

TEST_CASE("isothermal addition") {
    const GasState g{2.0, 400.0, 3.0, 10.0};
    const HeatStep same = isothermal_add(g, 0.0);
    CHECK(same.state.N == g.N);
    CHECK(same.state.S == g.S);
    CHECK(same.Q == 0.0);

    const HeatStep h = isothermal_add(g, 0.1);
    CHECK(h.dS == doctest::Approx(1.0));
    CHECK(h.Q == doctest::Approx(400.0));
    CHECK(h.state.V / h.state.N == doctest::Approx(g.V / g.N));
    CHECK(h.state.T == g.T);
    CHECK_THROWS_AS(isothermal_add(g, -0.1), DomainError);
}

TEST_CASE("adiabats") {
    const GasState g{1.0, 400.0, 1.0, 10.0, 1.5};
    const WorkStep same = adiabatic_expand(g, 400.0);
    CHECK(same.W == 0.0);
    CHECK(same.state.V == g.V);

    const WorkStep w = adiabatic_expand(g, 300.0);
    CHECK(w.W == doctest::Approx(150.0));
    CHECK(w.state.S == g.S);
    // T V^(gamma_ad - 1) is conserved with gamma_ad = 1 + 1/cV.
    CHECK(w.state.T * std::pow(w.state.V, 1.0 / g.cV) == doctest::Approx(g.T * std::pow(g.V, 1.0 / g.cV)));

    const WorkStep back = adiabatic_compress(w.state, 400.0);
    CHECK(back.W == doctest::Approx(150.0));
    CHECK(back.state.V == doctest::Approx(g.V).epsilon(1e-14));
    CHECK_THROWS_AS(adiabatic_expand(g, 500.0), DomainError);
    CHECK_THROWS_AS(adiabatic_compress(g, 300.0), DomainError);
}

TEST_CASE("isothermal removal") {
    const GasState g{1.1, 300.0, 1.5, 11.0};
    const HeatStep h = isothermal_remove(g, 10.0);
    CHECK(h.Q == doctest::Approx(300.0));
    CHECK(h.state.V / h.state.N == doctest::Approx(g.V / g.N));
    CHECK_THROWS_AS(isothermal_remove(g, 12.0), DomainError);
    CHECK_THROWS_AS(isothermal_remove(g, 0.0), DomainError);
}

TEST_CASE("full cycle") {
    const ClassicalSpec spec{400.0, 300.0, 0.1, GasState{1.0, 400.0, 1.0, 10.0}};
    const ClassicalReport r = classical_cycle(spec);
    CHECK(r.efficiency == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.Q1 == doctest::Approx(400.0));
    CHECK(r.Q2 == doctest::Approx(300.0));
    CHECK(r.W_net == doctest::Approx(100.0));
    CHECK(r.dS_in == doctest::Approx(r.dS_out).epsilon(1e-14));
    // Mechanical work equals the internal energy carried in minus carried out.
    CHECK(r.W_mech == doctest::Approx(r.E_in - r.E_out));
    CHECK(r.W_mech / r.Q1 != doctest::Approx(r.efficiency));

    ClassicalSpec other = spec;
    for (double x : {0.05, 0.5}) {
        other.add_fraction = x;
        CHECK(std::abs(classical_cycle(other).efficiency - r.efficiency) < 1e-12);
    }

    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double T1 = 1.0 + 999.0 * u(rng);
        const ClassicalSpec s{T1, T1 * (0.05 + 0.9 * u(rng)), 0.01 + 2.0 * u(rng),
                              GasState{0.1 + 10 * u(rng), T1, 0.1 + 10 * u(rng), 0.1 + 20 * u(rng), 1.5 + u(rng)}};
        const ClassicalReport c = classical_cycle(s);
        CHECK(std::abs(c.final_state.N - s.initial.N) <= 1e-10 * s.initial.N);
        CHECK(std::abs(c.final_state.V - s.initial.V) <= 1e-10 * s.initial.V);
        CHECK(std::abs(c.final_state.S - s.initial.S) <= 1e-10 * s.initial.S);
        CHECK(std::abs(c.final_state.T - s.initial.T) <= 1e-10 * s.initial.T);
        CHECK(std::abs(c.efficiency - (1.0 - s.T2 / s.T1)) < 1e-12);
        CHECK(std::abs(c.W_net - (c.Q1 - c.Q2)) <= 1e-10 * c.Q1);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(classical_cycle(ClassicalSpec{300.0, 400.0, 0.1, GasState{1, 300, 1, 10}}), DomainError);
    CHECK_THROWS_AS(classical_cycle(ClassicalSpec{400.0, 300.0, 0.0, GasState{1, 400, 1, 10}}), DomainError);
    CHECK_THROWS_AS(classical_cycle(ClassicalSpec{400.0, 300.0, 0.1, GasState{1, 350, 1, 10}}), DomainError);
}
