#include "nhqhe/errors.hpp"
#include "nhqhe/evolve.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

using namespace nhqhe;

namespace {

const cplx I{0.0, 1.0};

Matrix2 mat(cplx a, cplx b, cplx c, cplx d) {
    Matrix2 m;
    m << a, b, c, d;
    return m;
}

// Reference values from an independent ODE integration (rtol 1e-13).
const Matrix2 kU_05_0_1 = mat(1.0876616751810357, -0.8796046606571578 * I, -0.8796046606571578 * I,
                              0.20805701452387804);
const Matrix2 kU_05_01_5 = mat(cplx(-0.9269594357200867, -0.05448633217052493),
                               cplx(-0.29229083092237795, 1.0452083327903432),
                               cplx(0.24459023168368615, 1.057388295443346),
                               cplx(0.1933236967598681, 0.04626271053211509));
const Matrix2 kU_03_m07_25_04 = mat(cplx(-0.19220708481722096, 0.8713579357872662),
                                    cplx(-0.00844637964656052, -0.5969323359869829),
                                    cplx(0.4806409011943584, -0.35409586156165057),
                                    cplx(-0.5001142039671186, -0.7900812435102442));
const Matrix2 kUt_05_01_5 = mat(cplx(0.19332369675986869, -0.04626271053211508),
                                cplx(-0.24459023168368585, 1.0573882954433462),
                                cplx(0.2922908309223779, 1.0452083327903434),
                                cplx(-0.9269594357200873, 0.05448633217052555));

}  // namespace

TEST_CASE("closed-form propagator against reference integration") {
    CHECK((exact_propagator(SystemParams(0.5), 0.0, 1.0) - kU_05_0_1).norm() < 1e-12);
    CHECK((exact_propagator(SystemParams(0.5), 0.1, 5.0) - kU_05_01_5).norm() < 1e-11);
    CHECK((exact_propagator(SystemParams(0.3), -0.7, 2.5, 0.4) - kU_03_m07_25_04).norm() < 1e-11);
    CHECK((left_propagator(SystemParams(0.5), 0.1, 5.0) - kUt_05_01_5).norm() < 1e-11);
}

TEST_CASE("static propagator entry formula") {
    const double g = 0.5, s = std::sqrt(1.0 - g * g);
    const Matrix2 U = exact_propagator(SystemParams(g), 0.0, 1.0);
    CHECK(std::abs(U(0, 0) - (std::cos(s) + g / s * std::sin(s))) < 1e-14);
}

TEST_CASE("Hermitian spin flip") {
    const Matrix2 U = exact_propagator(SystemParams(0.0), 0.0, std::numbers::pi / 2);
    CHECK((U - mat(0.0, -I, -I, 0.0)).norm() < 1e-15);
    CHECK((left_propagator(SystemParams(0.0), 0.3, 2.0) - exact_propagator(SystemParams(0.0), 0.3, 2.0)).norm() <
          1e-15);
}

TEST_CASE("left propagator is the propagator of the opposite gamma") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> g(-0.9, 0.9), w(-3.0, 3.0), t(0.0, 5.0), p(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double gamma = g(rng), omega = w(rng), tau = t(rng), phi = p(rng);
        const Matrix2 Ut = left_propagator(SystemParams(gamma), omega, tau, phi);
        const Matrix2 Um = exact_propagator(SystemParams(-gamma), omega, tau, phi);
        CHECK((Ut - Um).norm() <= 1e-13 * std::max(1.0, Ut.norm()));
    }
    // And against stepwise evolution under H^dagger.
    const SystemParams params(0.5);
    const Matrix2 step = stepwise_propagator(linear_sweep_path(0.1, 5.0), 1e-3, params, Side::left);
    CHECK((step - kUt_05_01_5).norm() < 1e-5);
}

TEST_CASE("biorthonormal unitarity") {
    const SystemParams params(0.5);
    const PropagatorPair pair{exact_propagator(params, 0.01, 10.0), left_propagator(params, 0.01, 10.0)};
    CHECK(pair.biorthonormal_defect() < 1e-10);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> g(-0.9, 0.9), w(-5.0, 5.0), t(0.0, 50.0);
    for (int i = 0; i < 50; ++i) {
        const double gamma = g(rng), omega = w(rng), tau = t(rng);
        CHECK(biorthonormal_defect_extended(SystemParams(gamma), omega, tau) < 1e-10);
    }
    // Strongly amplifying corner of the box: double precision cannot resolve
    // the identity, the extended evaluation can.
    const SystemParams corner(0.9);
    const PropagatorPair big{exact_propagator(corner, 5.0, 50.0), left_propagator(corner, 5.0, 50.0)};
    CHECK(big.U.norm() > 1e15);
    CHECK(big.biorthonormal_defect() > 1.0);
    CHECK(biorthonormal_defect_extended(corner, 5.0, 50.0) < 1e-10);
}

TEST_CASE("backward run inverts the forward run") {
    const SystemParams params(0.4);
    const double omega = 0.7, tau = 3.0, phi = 0.2;
    const Matrix2 fwd = exact_propagator(params, omega, tau, phi);
    const Matrix2 back = exact_propagator(params, omega, -tau, phi + omega * tau);
    CHECK((back * fwd - Matrix2::Identity()).norm() < 1e-12);
}

TEST_CASE("semigroup and composition") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> g(-0.9, 0.9), w(-5.0, 5.0), t(0.0, 10.0), p(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const SystemParams params(g(rng));
        const double omega = w(rng), t1 = t(rng), t2 = t(rng), phi = p(rng);
        const std::array<DriveSegment, 2> segs{DriveSegment{omega, t1, phi},
                                               DriveSegment{omega, t2, phi + omega * t1}};
        const PropagatorPair two = compose_segments(segs, params);
        const Matrix2 one = exact_propagator(params, omega, t1 + t2, phi);
        CHECK((two.U - one).norm() <= 1e-12 * std::max(1.0, one.norm()));
    }
    const SystemParams params(0.3);
    const std::array<DriveSegment, 1> single{DriveSegment{0.4, 2.0, 0.1}};
    CHECK((compose_segments(single, params).U - exact_propagator(params, 0.4, 2.0, 0.1)).norm() == 0.0);

    const std::array<DriveSegment, 2> broken{DriveSegment{0.4, 2.0, 0.0}, DriveSegment{0.4, 1.0, 0.5}};
    CHECK_THROWS_AS(compose_segments(broken, params), DomainError);
}

TEST_CASE("composed legs match stepwise evolution along a smooth path") {
    // Piecewise-constant rate is smooth within each leg; the stepwise oracle
    // follows the same phi(t) with J(t) = 1.
    const SystemParams params(0.4);
    const std::array<DriveSegment, 3> segs{DriveSegment{0.3, 1.5, 0.0}, DriveSegment{-0.5, 2.0, 0.45},
                                           DriveSegment{0.0, 1.0, -0.55}};
    const PropagatorPair pair = compose_segments(segs, params);
    Matrix2 step = Matrix2::Identity();
    for (const auto& s : segs) {
        step = stepwise_propagator(linear_sweep_path(s.omega, s.tau, s.phi_start), 5e-5, params) * step;
    }
    CHECK((pair.U - step).norm() < 1e-8);
}

TEST_CASE("stepwise oracle") {
    const SystemParams params(0.6);
    // Constant H: the product of exponentials is the single exponential.
    const Matrix2 H = build_hamiltonian(params, ControlPoint(1.0, 0.3));
    for (double dt : {0.5, 0.1, 0.013}) {
        const Matrix2 s = stepwise_propagator(linear_sweep_path(0.0, 2.0, 0.3), dt, params);
        CHECK((s - expm2(-I * 2.0 * H)).norm() < 1e-12);
    }
    CHECK((expm2(-I * 2.0 * H) - exact_propagator(params, 0.0, 2.0, 0.3)).norm() < 1e-13);

    // Hermitian drive stays unitary.
    const Matrix2 u = stepwise_propagator(linear_sweep_path(1.3, 4.0), 1e-2, SystemParams(0.0));
    CHECK((u.adjoint() * u - Matrix2::Identity()).norm() < 1e-12);

    CHECK_THROWS_AS(stepwise_propagator(linear_sweep_path(0.1, 1.0), 0.0, params), DomainError);
}

TEST_CASE("expm2 against a Taylor series") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 50; ++i) {
        Matrix2 A;
        A << cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng));
        Matrix2 sum = Matrix2::Identity(), term = Matrix2::Identity();
        for (int k = 1; k < 60; ++k) {
            term = term * A / static_cast<double>(k);
            sum += term;
        }
        CHECK((expm2(A) - sum).norm() <= 1e-13 * sum.norm());
    }
    // Nilpotent: exp(N) = 1 + N.
    const Matrix2 N = mat(0.0, 1.0, 0.0, 0.0);
    CHECK((expm2(N) - (Matrix2::Identity() + N)).norm() < 1e-15);
}

TEST_CASE("stepwise error is second order and small at dt = 1e-4") {
    const SystemParams params(0.5);
    const Matrix2 exact = exact_propagator(params, 0.1, 5.0);
    std::array<double, 3> e{};
    const std::array<double, 3> dts{0.02, 0.01, 0.005};
    for (std::size_t k = 0; k < 3; ++k) {
        e[k] = (stepwise_propagator(linear_sweep_path(0.1, 5.0), dts[k], params) - exact).norm();
    }
    CHECK(e[0] / e[1] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(e[1] / e[2] == doctest::Approx(4.0).epsilon(0.05));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> g(-0.9, 0.9), w(-5.0, 5.0), t(0.5, 5.0);
    for (int i = 0; i < 6; ++i) {
        const SystemParams p(g(rng));
        const double omega = w(rng), tau = t(rng);
        const Matrix2 ref = exact_propagator(p, omega, tau);
        const double err = (stepwise_propagator(linear_sweep_path(omega, tau), 1e-4, p) - ref).norm();
        CHECK(err <= 1e-7 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("principal branch keeps the propagator continuous in gamma") {
    Matrix2 prev = exact_propagator(SystemParams(-0.9), 2.0, 3.0);
    for (int k = 1; k <= 1800; ++k) {
        const double g = -0.9 + k * 1e-3;
        const Matrix2 cur = exact_propagator(SystemParams(g), 2.0, 3.0);
        REQUIRE((cur - prev).norm() < 0.2);
        prev = cur;
    }
    // Omega crosses zero only at the exceptional point; small Omega tau uses the series.
    CHECK((exact_propagator(SystemParams(0.2), 0.5, 1e-9) - Matrix2::Identity()).norm() < 1e-8);
}

TEST_CASE("adiabatic phase") {
    const SystemParams p(0.6);
    const AdiabaticPhase plus = adiabatic_phase(p, Branch::plus, 3.0, 0.0, 1.0);
    const AdiabaticPhase minus = adiabatic_phase(p, Branch::minus, 3.0, 0.0, 1.0);
    CHECK(plus.im_part == doctest::Approx(-0.375).epsilon(1e-15));
    CHECK(minus.im_part == -plus.im_part);
    CHECK(std::exp(-2.0 * plus.im_part) == doctest::Approx(2.117000016612675).epsilon(1e-15));
    CHECK(plus.value.real() == doctest::Approx(-0.8 * 3.0 + 0.5));
    CHECK(plus.truncated.real() == 0.0);
    CHECK(plus.truncated.imag() == doctest::Approx(-0.375).epsilon(1e-15));

    CHECK(adiabatic_phase(p, Branch::plus, 2.0, 1.0, 1.0).im_part == 0.0);
    CHECK(adiabatic_phase(SystemParams(0.0), Branch::plus, 2.0, 0.0, 1.5).value.imag() == 0.0);

    // Imaginary part depends only on the phi endpoints.
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> J(0.0, 100.0);
    for (int i = 0; i < 20; ++i) {
        CHECK(adiabatic_phase(p, Branch::plus, J(rng), 0.3, 1.7).im_part ==
              adiabatic_phase(p, Branch::plus, 1.0, 0.3, 1.7).im_part);
    }
}

TEST_CASE("adiabatic populations") {
    const SystemParams p(0.5);
    const double dphi = std::log(2.0) * p.spectral_factor() / p.gamma();
    CHECK(xi_factor(p, 0.0, dphi) == doctest::Approx(2.0).epsilon(1e-15));
    const Populations pop = adiabatic_populations(0.2, p, 0.0, dphi);
    CHECK(pop.plus == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(pop.minus == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(pop.total() == doctest::Approx(0.8).epsilon(1e-15));

    const Populations same = adiabatic_populations(0.2, SystemParams(0.0), 0.0, 2.0);
    CHECK(same.plus == 0.2);
    CHECK(same.minus == 0.8);
    const Populations round = adiabatic_populations(0.3, p, 1.2, 1.2);
    CHECK(round.plus == 0.3);
    CHECK_THROWS_AS(adiabatic_populations(0.0, p, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(adiabatic_populations(1.0, p, 0.0, 1.0), DomainError);

    // Slow exact evolution reproduces xi.
    const double omega = 1e-4;
    const Matrix2 U = exact_propagator(p, omega, dphi / omega, 0.0);
    CHECK(evolved_population_weight(p, U, Branch::plus, 0.0) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(evolved_population_weight(p, U, Branch::minus, 0.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("adiabaticity margin") {
    const SystemParams p(0.5);
    CHECK(adiabaticity_margin(p, 0.0, 1.0).reduced == 0.0);
    CHECK(adiabaticity_margin(p, 0.0075, 1.0).reduced == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(adiabaticity_margin(p, 0.0075, 3.0).original_time == doctest::Approx(0.0025).epsilon(1e-14));
    CHECK(omega_for_margin(p, 0.01, -1.0) == doctest::Approx(-0.0075));
    CHECK_THROWS_AS(adiabaticity_margin(p, 0.1, 0.0), DomainError);
}

TEST_CASE("population error shrinks with the margin") {
    const SystemParams p(0.5);
    auto err = [&p](double margin) {
        const double omega = omega_for_margin(p, margin);
        return population_envelope_error(p, DriveSegment{omega, 1.0 / omega, 0.0}, Branch::plus);
    };
    const double coarse = err(0.1), fine = err(0.01);
    CHECK(coarse / fine == doctest::Approx(10.0).epsilon(0.2));
    CHECK(err(1e-3) < 1e-2);
}
