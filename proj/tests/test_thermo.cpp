#include "nhqhe/errors.hpp"
#include "nhqhe/path.hpp"
#include "nhqhe/thermo.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace nhqhe;

namespace {

// Phase offset giving the requested xi.
double dphi_for_xi(const SystemParams& p, double xi) { return std::log(xi) * p.spectral_factor() / p.gamma(); }

ControlPath leg(PlanePoint a, PlanePoint b) { return ControlPath({line_segment(a, b)}, false); }

}  // namespace

TEST_CASE("spectral temperature") {
    const SystemParams h(0.0);
    const Preparation prep{0.2, 0.0};
    const Temperature T0 = temperature(prepare_state(h, prep, ControlPoint(1.0, 0.0)), h);
    CHECK_FALSE(T0.infinite);
    CHECK(T0.value == doctest::Approx(1.4426950408889634).epsilon(1e-15));

    const SystemParams p(0.5);
    const MixedState at_two = prepare_state(p, prep, ControlPoint(1.0, dphi_for_xi(p, 2.0)));
    CHECK(at_two.P_plus == doctest::Approx(0.4));
    CHECK(temperature(at_two, p).infinite);
    CHECK(temperature(prepare_state(p, Preparation{0.5, 0.3}, ControlPoint(2.0, 0.3)), p).infinite);

    const Temperature inverted = temperature(prepare_state(h, Preparation{0.7, 0.0}, ControlPoint(1.0, 0.0)), h);
    CHECK(inverted.negative());

    // The Boltzmann relation ln(P+/P-) = -(eps+ - eps-)/(kB T).
    const SystemParams q(0.3, 2.0);
    const MixedState s = prepare_state(q, Preparation{0.25, 0.1}, ControlPoint(1.7, 0.9));
    const Temperature T = temperature(s, q);
    CHECK(std::log(s.P_plus / s.P_minus) ==
          doctest::Approx(-2.0 * 1.7 * q.spectral_factor() / (q.kB() * T.value)).epsilon(1e-14));
}

TEST_CASE("mixed-state invariant P+ P- = p0 (1 - p0)") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> g(-0.9, 0.9), p0(0.01, 0.99), phi(-3.0, 3.0), J(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const SystemParams p(g(rng));
        const double q = p0(rng);
        const MixedState s = prepare_state(p, Preparation{q, phi(rng)}, ControlPoint(J(rng), phi(rng)));
        CHECK(s.P_plus * s.P_minus == doctest::Approx(q * (1.0 - q)).epsilon(1e-12));
    }
}

TEST_CASE("internal energy, entropy, partition function") {
    const SystemParams p(0.4);
    const double s = p.spectral_factor();
    const MixedState half = prepare_state(p, Preparation{0.5, 0.0}, ControlPoint(1.3, 0.0));
    CHECK(internal_energy(half, p) == 0.0);
    CHECK(entropy(half, p) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    const double p0 = 0.2, J1 = 2.0, xi = 1.7;
    const MixedState A = prepare_state(p, Preparation{p0, 0.0}, ControlPoint(J1, 0.0));
    CHECK(internal_energy(A, p) == doctest::Approx(J1 * (2 * p0 - 1) * s).epsilon(1e-15));
    const MixedState B = prepare_state(p, Preparation{p0, 0.0}, ControlPoint(J1, dphi_for_xi(p, xi)));
    CHECK(internal_energy(B, p) == doctest::Approx((p0 * (xi + 1 / xi) - 1 / xi) * J1 * s).epsilon(1e-13));
    CHECK(entropy(B, p) ==
          doctest::Approx(-p0 * xi * std::log(p0 * xi) - (1 - p0) / xi * std::log((1 - p0) / xi)).epsilon(1e-13));
    const MixedState D = prepare_state(p, Preparation{p0, 0.0}, ControlPoint(0.7, 0.0));
    CHECK(entropy(A, p) == entropy(D, p));

    const ThermoObservables obs = observables(B, p);
    CHECK(obs.U == doctest::Approx(obs.P_plus * obs.eps_plus - obs.P_minus * obs.eps_plus).epsilon(1e-15));

    CHECK(partition_Z(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(partition_Z(0.2) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(partition_Z(0.13) == doctest::Approx(partition_Z(0.87)).epsilon(1e-14));
}

TEST_CASE("Hermitian loops exchange nothing") {
    const SystemParams h(0.0);
    const Preparation prep{0.3, 0.0};
    const ControlPath e = ellipse({2.0, 0.5}, 1.2, 0.9, 3, 0.4);
    CHECK(std::abs(heat_line_integral(e, prep, h)) <= 1e-12);
    CHECK(std::abs(work_line_integral(e, prep, h)) <= 1e-12);
    CHECK(std::abs(heat_surface_integral(Rectangle{1.0, 2.0, 0.0, 1.0}, prep, h)) <= 1e-12);
}

TEST_CASE("degenerate paths") {
    const SystemParams p(0.6);
    const Preparation prep{0.3, 0.0};
    const std::vector<PlanePoint> there_and_back{{1.0, 0.0}, {2.0, 1.5}};
    CHECK(std::abs(heat_line_integral(polyline(there_and_back, true), prep, p)) < 1e-12);
    CHECK(heat_surface_integral(Rectangle{1.0, 1.0, 0.0, 2.0}, prep, p) == 0.0);
    CHECK(heat_surface_integral(Rectangle{1.0, 2.0, 0.5, 0.5}, prep, p) == 0.0);
}

TEST_CASE("line integrals along single legs") {
    const SystemParams p(0.5);
    const double s = p.spectral_factor();
    const Preparation prep{0.2, 0.0};
    const double phi2 = dphi_for_xi(p, 2.0);

    // Pure phi leg: no work.
    CHECK(work_line_integral(leg({2.0, 0.0}, {2.0, phi2}), prep, p) == 0.0);
    // Pure J leg: no heat, work = sum P d eps.
    const MixedState st = prepare_state(p, prep, ControlPoint(2.0, phi2));
    CHECK(heat_line_integral(leg({2.0, phi2}, {0.5, phi2}), prep, p) == 0.0);
    CHECK(work_line_integral(leg({2.0, phi2}, {0.5, phi2}), prep, p) ==
          doctest::Approx((st.P_plus - st.P_minus) * s * (0.5 - 2.0)).epsilon(1e-13));

    // Heat on the phi leg from xi = 1 to 2.
    CHECK(heat_line_integral(leg({2.0, 0.0}, {2.0, phi2}), prep, p) ==
          doctest::Approx(2.0 * s * ((0.4 - 0.4) - (0.2 - 0.8))).epsilon(1e-12));
}

TEST_CASE("Clausius integral vs state entropy change") {
    const SystemParams p(0.5);
    const Preparation prep{0.2, 0.0};
    const double phi2 = dphi_for_xi(p, 2.0);
    const double clausius = entropy_line_integral(leg({1.0, 0.0}, {1.0, phi2}), prep, p);
    const double state = entropy_change_line_integral(leg({1.0, 0.0}, {1.0, phi2}), prep, p);
    CHECK(clausius == doctest::Approx(0.21588830833596717).epsilon(1e-12));
    CHECK(state == doctest::Approx(0.23263016196113617).epsilon(1e-12));
    const double S_diff = entropy(prepare_state(p, prep, ControlPoint(1.0, phi2)), p) -
                          entropy(prepare_state(p, prep, ControlPoint(1.0, 0.0)), p);
    CHECK(state == doctest::Approx(S_diff).epsilon(1e-12));

    // Reversing the phi sweep at another J flips both.
    CHECK(entropy_line_integral(leg({0.4, phi2}, {0.4, 0.0}), prep, p) == doctest::Approx(-clausius).epsilon(1e-12));
    CHECK(entropy_change_line_integral(leg({0.4, phi2}, {0.4, 0.0}), prep, p) ==
          doctest::Approx(-state).epsilon(1e-12));

    // The regular form stays finite across T = infinity (xi = 2 is crossed).
    const double across = entropy_line_integral(leg({1.0, 0.0}, {1.0, 2.0 * phi2}), prep, p);
    CHECK(std::isfinite(across));
}

TEST_CASE("closed loops: dU = 0, dW = -dQ, dS = 0") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> g(-0.9, 0.9), u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const SystemParams p(g(rng));
        const Preparation prep{0.05 + 0.9 * u(rng), u(rng)};
        const ControlPath path = i % 2 == 0
                                     ? ellipse({1.5 + u(rng), u(rng)}, 0.2 + u(rng), 0.2 + u(rng), 1 + i % 5)
                                     : fourier_loop({2.0, 0.0}, {{0.5 * u(rng), 0.3 * u(rng), u(rng), 0.5 * u(rng)},
                                                                 {0.2 * u(rng), 0.1, 0.3 * u(rng), 0.2}});
        const double scale = path.max_J() * p.spectral_factor();
        const double Q = heat_line_integral(path, prep, p);
        const double W = work_line_integral(path, prep, p);
        CHECK(std::abs(Q + W) <= 1e-10 * scale);
        CHECK(std::abs(entropy_line_integral(path, prep, p)) <= 1e-9 * scale);
        CHECK(std::abs(entropy_change_line_integral(path, prep, p)) <= 1e-9 * scale);
    }
}

TEST_CASE("state functions are path independent") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> g(-0.9, 0.9), u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const SystemParams p(g(rng));
        const Preparation prep{0.1 + 0.8 * u(rng), 0.0};
        const PlanePoint a{0.5 + u(rng), 0.0}, b{1.0 + 2.0 * u(rng), 2.0 * u(rng) - 1.0};
        const PlanePoint via1{a.J, b.phi}, via2{b.J + 1.0, a.phi - 0.5};
        const std::vector<PlanePoint> r1{a, via1, b}, r2{a, via2, b};
        const ControlPath p1 = polyline(r1, false), p2 = polyline(r2, false);
        const double dU1 = heat_line_integral(p1, prep, p) + work_line_integral(p1, prep, p);
        const double dU2 = heat_line_integral(p2, prep, p) + work_line_integral(p2, prep, p);
        const double exact = internal_energy(prepare_state(p, prep, ControlPoint(b.J, b.phi)), p) -
                             internal_energy(prepare_state(p, prep, ControlPoint(a.J, a.phi)), p);
        CHECK(dU1 == doctest::Approx(exact).epsilon(1e-10));
        CHECK(dU2 == doctest::Approx(exact).epsilon(1e-10));
        CHECK(entropy_change_line_integral(p1, prep, p) ==
              doctest::Approx(entropy_change_line_integral(p2, prep, p)).epsilon(1e-10));
    }
}

TEST_CASE("Green's theorem and the exact primitive") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> g(-0.9, 0.9), u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const SystemParams p(g(rng));
        const Preparation prep{0.05 + 0.9 * u(rng), u(rng) - 0.5};
        const Rectangle r{0.2 + u(rng), 1.5 + 2.0 * u(rng), -1.0 + u(rng), 0.5 + 2.0 * u(rng)};
        const std::vector<PlanePoint> ccw{{r.J_lo, r.phi_lo}, {r.J_hi, r.phi_lo}, {r.J_hi, r.phi_hi}, {r.J_lo, r.phi_hi}};
        const double line = heat_line_integral(polyline(ccw, true), prep, p);
        CHECK(std::abs(line - heat_surface_integral(r, prep, p)) <= 1e-8);
        CHECK(std::abs(line - heat_surface_integral(std::span<const PlanePoint>(ccw), prep, p)) <= 1e-8);
        CHECK(std::abs(line - heat_rectangle_closed_form(r, prep, p)) <= 1e-8);
    }

    // Triangle, both orientations.
    const SystemParams p(0.7);
    const Preparation prep{0.3, 0.2};
    std::vector<PlanePoint> tri{{1.0, 0.0}, {3.0, 0.5}, {1.5, 2.0}};
    const double line = heat_line_integral(polyline(tri, true), prep, p);
    CHECK(line == doctest::Approx(heat_surface_integral(std::span<const PlanePoint>(tri), prep, p)).epsilon(1e-10));
    std::reverse(tri.begin(), tri.end());
    CHECK(heat_line_integral(polyline(tri, true), prep, p) == doctest::Approx(-line).epsilon(1e-10));
    CHECK(heat_surface_integral(std::span<const PlanePoint>(tri), prep, p) == doctest::Approx(-line).epsilon(1e-10));
}

TEST_CASE("counterclockwise rectangles absorb heat for gamma > 0") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> g(0.01, 0.9), u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const SystemParams p(g(rng));
        const Rectangle r{0.2 + u(rng), 1.5 + u(rng), u(rng), 1.0 + 2.0 * u(rng)};
        CHECK(heat_surface_integral(r, Preparation{0.05 + 0.9 * u(rng), 0.0}, p) > 0.0);
    }
}
