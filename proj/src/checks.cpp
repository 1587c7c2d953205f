#include "nhqhe/checks.hpp"

#include "nhqhe/classical.hpp"
#include "nhqhe/cycle.hpp"
#include "nhqhe/errors.hpp"
#include "nhqhe/evolve.hpp"
#include "nhqhe/path.hpp"
#include "nhqhe/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <thread>

namespace nhqhe {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double random_sign(Rng& rng) { return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0; }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Evaluates f on every input across a few worker threads. Results are stored
// by index, so the reduction order never depends on scheduling.
template <class In, class F>
auto parallel_map(const std::vector<In>& inputs, F f) {
    using Out = std::invoke_result_t<F, const In&>;
    std::vector<Out> out(inputs.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(inputs.size(), std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < inputs.size(); i += workers) {
                out[i] = f(inputs[i]);
            }
        }));
    }
    for (auto& j : jobs) {
        j.get();
    }
    return out;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Outcome {
    double measured;
    bool passed;
    std::string detail;
};

CheckResult run_check(int id, std::string name, std::string limit, const std::function<Outcome()>& body) {
    try {
        Outcome o = body();
        return CheckResult{id, std::move(name), o.passed, o.measured, std::move(limit), std::move(o.detail)};
    } catch (const std::exception& e) {
        return CheckResult{id,    std::move(name), false, std::numeric_limits<double>::quiet_NaN(),
                           std::move(limit), std::string("exception: ") + e.what()};
    }
}

OttoSpec random_otto_spec(Rng& rng) {
    const double J2 = uniform(rng, 0.2, 2.0);
    const double J1 = J2 + uniform(rng, 0.1, 3.0);
    const double gamma = random_sign(rng) * uniform(rng, 0.01, 0.9);
    const double p0 = uniform(rng, 0.05, 0.45);
    const double phi1 = uniform(rng, -3.0, 3.0);
    const double phi2 = phi1 + uniform(rng, 0.1, 3.0);
    return OttoSpec{J1, J2, phi1, phi2, p0, SystemParams(gamma)};
}

struct LoopCase {
    ControlPath path;
    Preparation prep;
    double gamma;
};

LoopCase random_smooth_loop(Rng& rng, bool fourier, double gamma) {
    const Preparation prep{uniform(rng, 0.05, 0.95), uniform(rng, -1.0, 1.0)};
    if (!fourier) {
        const PlanePoint c{uniform(rng, 1.0, 3.0), uniform(rng, -1.0, 1.0)};
        const double a = uniform(rng, 0.1, 0.9) * c.J;
        const double b = random_sign(rng) * uniform(rng, 0.1, 1.5);
        const int pieces = uniform_int(rng, 1, 6);
        return LoopCase{ellipse(c, a, b, pieces, uniform(rng, 0.0, 6.3)), prep, gamma};
    }
    const PlanePoint c{uniform(rng, 1.5, 3.0), uniform(rng, -1.0, 1.0)};
    const int n = uniform_int(rng, 1, 3);
    std::vector<LoopHarmonic> h(static_cast<std::size_t>(n));
    // Keep sum |J coefficients| below 0.8 J_c so that J stays positive.
    const double budget = 0.8 * c.J / (2.0 * n);
    for (auto& k : h) {
        k = LoopHarmonic{uniform(rng, -budget, budget), uniform(rng, -budget, budget), uniform(rng, -0.6, 0.6),
                         uniform(rng, -0.6, 0.6)};
    }
    return LoopCase{fourier_loop(c, std::move(h), uniform_int(rng, 1, 5)), prep, gamma};
}

// |a - b| relative to the larger magnitude, floored at the natural scale of
// the quantity so that exact zeros compare sensibly.
double rel_diff(double a, double b, double floor) {
    if (std::isnan(a) && std::isnan(b)) {
        return 0.0;
    }
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace

CheckResult check_otto_efficiency(std::uint64_t seed) {
    return run_check(1, "Otto efficiency equals 1 - J2/J1", "<= 1e-08", [seed] {
        Rng rng(seed ^ 0x01);
        std::vector<OttoSpec> specs;
        for (int i = 0; i < 200; ++i) {
            specs.push_back(random_otto_spec(rng));
        }
        const auto err = parallel_map(specs, [](const OttoSpec& s) {
            return std::abs(otto_efficiency(s) - (1.0 - s.J2 / s.J1));
        });
        const double worst = *std::max_element(err.begin(), err.end());
        return Outcome{worst, worst <= 1e-8, "200 specs, |gamma| in [0.01, 0.9]"};
    });
}

CheckResult check_closed_form_reproduction(std::uint64_t seed) {
    return run_check(2, "closed-form corners and processes vs pipeline", "<= 1e-08 (relative)", [seed] {
        Rng rng(seed ^ 0x02);
        std::vector<OttoSpec> specs;
        for (int i = 0; i < 100; ++i) {
            specs.push_back(random_otto_spec(rng));
        }
        struct Cells {
            double worst;
            int compared;
        };
        const auto res = parallel_map(specs, [](const OttoSpec& s) {
            const double energy = s.J1 * s.params.spectral_factor();
            const double kB = s.params.kB();
            const Corners t1 = corner_closed_forms(s);
            const Corners c1 = otto_corner_states(s);
            double t_scale = 0.0;
            for (const auto& c : t1) {
                if (!c.obs.T.infinite) {
                    t_scale = std::max(t_scale, std::abs(c.obs.T.value));
                }
            }
            Cells out{0.0, 0};
            auto cmp = [&out](double a, double b, double floor) {
                if (std::isnan(a) || std::isnan(b)) {
                    return;
                }
                out.worst = std::max(out.worst, rel_diff(a, b, floor));
                ++out.compared;
            };
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& a = t1[k].obs;
                const auto& b = c1[k].obs;
                if (a.T.infinite != b.T.infinite) {
                    out.worst = std::numeric_limits<double>::infinity();
                } else if (!a.T.infinite) {
                    cmp(a.T.value, b.T.value, 0.0);
                }
                cmp(a.eps_plus, b.eps_plus, energy);
                cmp(a.P_plus, b.P_plus, 1.0);
                cmp(a.U, b.U, energy);
                cmp(a.S, b.S, kB);
            }
            const Processes t2 = process_closed_forms(s);
            const Processes c2 = otto_process_deltas(s);
            for (std::size_t k = 0; k < 4; ++k) {
                cmp(t2[k].dT, c2[k].dT, t_scale);
                cmp(t2[k].dU, c2[k].dU, energy);
                cmp(t2[k].dQ, c2[k].dQ, energy);
                cmp(t2[k].dW, c2[k].dW, energy);
                cmp(t2[k].dS, c2[k].dS, kB);
            }
            return out;
        });
        double worst = 0.0;
        int compared = 0;
        for (const auto& r : res) {
            worst = std::max(worst, r.worst);
            compared += r.compared;
        }
        return Outcome{worst, worst <= 1e-8, "100 specs, " + std::to_string(compared) + " cells compared"};
    });
}

CheckResult check_closed_loop_state_functions(std::uint64_t seed) {
    return run_check(3, "closed-loop dU and dS vanish", "<= 1e-09 (in units of loop energy scale)", [seed] {
        Rng rng(seed ^ 0x03);
        std::vector<LoopCase> loops;
        for (int i = 0; i < 50; ++i) {
            const double gamma = uniform(rng, -0.9, 0.9);
            loops.push_back(random_smooth_loop(rng, i % 2 == 1, gamma));
        }
        const auto res = parallel_map(loops, [](const LoopCase& c) {
            const LoopTotals t = generic_loop_report(c.path, c.prep, SystemParams(c.gamma));
            return std::max({std::abs(t.dU), std::abs(t.dS), std::abs(t.dS_state)}) / t.energy_scale;
        });
        const double worst = *std::max_element(res.begin(), res.end());
        return Outcome{worst, worst <= 1e-9, "25 ellipses, 25 Fourier loops; dS both as Clausius and Gibbs integral"};
    });
}

CheckResult check_hermitian_triviality(std::uint64_t seed) {
    return run_check(4, "gamma = 0 loops exchange no heat or work", "<= 1e-12", [seed] {
        Rng rng(seed ^ 0x04);
        std::vector<LoopCase> loops;
        for (int i = 0; i < 30; ++i) {
            if (i % 3 == 2) {
                const double J2 = uniform(rng, 0.2, 2.0);
                const double J1 = J2 + uniform(rng, 0.1, 3.0);
                const double phi1 = uniform(rng, -3.0, 3.0);
                loops.push_back(LoopCase{otto_rectangle(J1, J2, phi1, phi1 + uniform(rng, 0.1, 3.0)),
                                         Preparation{uniform(rng, 0.05, 0.95), phi1}, 0.0});
            } else {
                loops.push_back(random_smooth_loop(rng, i % 3 == 1, 0.0));
            }
        }
        const auto res = parallel_map(loops, [](const LoopCase& c) {
            const SystemParams params(0.0);
            return std::max(std::abs(heat_line_integral(c.path, c.prep, params)),
                            std::abs(work_line_integral(c.path, c.prep, params)));
        });
        const double worst = *std::max_element(res.begin(), res.end());
        return Outcome{worst, worst <= 1e-12, "30 loops: ellipses, Fourier loops, rectangles"};
    });
}

CheckResult check_green_theorem(std::uint64_t seed) {
    return run_check(5, "rectangle heat: line vs surface integral", "<= 1e-08", [seed] {
        Rng rng(seed ^ 0x05);
        struct Case {
            Rectangle rect;
            Preparation prep;
            double gamma;
        };
        std::vector<Case> cases;
        for (int i = 0; i < 100; ++i) {
            const double J_lo = uniform(rng, 0.2, 2.0);
            const double phi_lo = uniform(rng, -2.0, 2.0);
            cases.push_back(Case{Rectangle{J_lo, J_lo + uniform(rng, 0.1, 3.0), phi_lo, phi_lo + uniform(rng, 0.1, 3.0)},
                                 Preparation{uniform(rng, 0.05, 0.95), uniform(rng, -1.0, 1.0)},
                                 uniform(rng, -0.9, 0.9)});
        }
        struct Diff {
            double surface;
            double closed;
        };
        const auto res = parallel_map(cases, [](const Case& c) {
            const SystemParams params(c.gamma);
            const Rectangle& r = c.rect;
            const std::vector<PlanePoint> ccw{{r.J_lo, r.phi_lo}, {r.J_hi, r.phi_lo}, {r.J_hi, r.phi_hi}, {r.J_lo, r.phi_hi}};
            const double line = heat_line_integral(polyline(ccw, true), c.prep, params);
            const double rect = heat_surface_integral(r, c.prep, params);
            const double poly = heat_surface_integral(std::span<const PlanePoint>(ccw), c.prep, params);
            return Diff{std::max(std::abs(line - rect), std::abs(line - poly)),
                        std::abs(line - heat_rectangle_closed_form(r, c.prep, params))};
        });
        double worst = 0.0, worst_closed = 0.0;
        for (const auto& d : res) {
            worst = std::max(worst, d.surface);
            worst_closed = std::max(worst_closed, d.closed);
        }
        return Outcome{worst, worst <= 1e-8,
                       "100 rectangles; line vs exact primitive " + sci(worst_closed)};
    });
}

CheckResult check_biorthonormal_unitarity(std::uint64_t seed) {
    return run_check(6, "biorthonormal unitarity of U, U_tilde", "< 1e-10", [seed] {
        Rng rng(seed ^ 0x06);
        struct Case {
            double gamma, omega, tau, phi;
        };
        std::vector<Case> cases;
        for (double g : {-0.9, 0.9}) {
            for (double w : {-5.0, 0.0, 5.0}) {
                for (double t : {0.0, 50.0}) {
                    cases.push_back(Case{g, w, t, 0.0});
                }
            }
        }
        for (int i = 0; i < 300; ++i) {
            cases.push_back(Case{uniform(rng, -0.9, 0.9), uniform(rng, -5.0, 5.0), uniform(rng, 0.0, 50.0),
                                 uniform(rng, -3.2, 3.2)});
        }
        struct Defects {
            double extended;
            double plain;
        };
        const auto res = parallel_map(cases, [](const Case& c) {
            const SystemParams params(c.gamma);
            const PropagatorPair pair{exact_propagator(params, c.omega, c.tau, c.phi),
                                      left_propagator(params, c.omega, c.tau, c.phi)};
            return Defects{biorthonormal_defect_extended(params, c.omega, c.tau, c.phi), pair.biorthonormal_defect()};
        });
        double worst = 0.0, worst_plain = 0.0;
        for (const auto& d : res) {
            worst = std::max(worst, d.extended);
            worst_plain = std::max(worst_plain, d.plain);
        }
        return Outcome{worst, worst < 1e-10,
                       std::to_string(cases.size()) + " points, 50-digit product; double-precision product " +
                           sci(worst_plain)};
    });
}

CheckResult check_adiabatic_convergence(std::uint64_t seed) {
    return run_check(7, "adiabatic error halves with the margin", "ratios in [1.5, 2.5]", [seed] {
        Rng rng(seed ^ 0x07);
        std::vector<OttoSpec> specs;
        for (int i = 0; i < 8; ++i) {
            specs.push_back(random_otto_spec(rng));
        }
        const std::array<double, 3> margins{1e-2, 5e-3, 2.5e-3};
        const auto res = parallel_map(specs, [&margins](const OttoSpec& s) {
            std::array<double, 3> e{};
            for (std::size_t k = 0; k < margins.size(); ++k) {
                e[k] = otto_adiabatic_error(s, margins[k]);
            }
            return std::array<double, 2>{e[0] / e[1], e[1] / e[2]};
        });
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 2.0;
        bool ok = true;
        for (const auto& r : res) {
            for (double q : r) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
                if (!(std::abs(q - 2.0) <= std::abs(worst - 2.0))) {
                    worst = q;
                }
                ok = ok && q >= 1.5 && q <= 2.5;
            }
        }
        return Outcome{worst, ok, "8 specs, ratios span [" + sci(lo) + ", " + sci(hi) + "]"};
    });
}

CheckResult check_oracle_convergence(std::uint64_t seed) {
    return run_check(8, "stepwise oracle converges at second order", "ratios in [3.5, 4.5]", [seed] {
        Rng rng(seed ^ 0x08);
        struct Case {
            double gamma, omega, T, phi;
            bool varying_J;
        };
        std::vector<Case> cases{{0.5, 0.1, 5.0, 0.0, false}};
        for (int i = 0; i < 7; ++i) {
            cases.push_back(Case{uniform(rng, -0.9, 0.9), random_sign(rng) * uniform(rng, 0.1, 2.0),
                                 uniform(rng, 1.0, 5.0), uniform(rng, -3.0, 3.0), i % 2 == 0});
        }
        const auto res = parallel_map(cases, [](const Case& c) {
            const SystemParams params(c.gamma);
            TimedPath path = linear_sweep_path(c.omega, c.T, c.phi);
            double tau = c.T;
            if (c.varying_J) {
                // J(t) = 1 + sin(t)/2, phi follows the accumulated tau.
                const double w = c.omega, p = c.phi;
                path.J = [](double t) { return 1.0 + 0.5 * std::sin(t); };
                path.phi = [w, p](double t) { return p + w * (t + 0.5 * (1.0 - std::cos(t))); };
                tau = c.T + 0.5 * (1.0 - std::cos(c.T));
            }
            const Matrix2 exact = exact_propagator(params, c.omega, tau, c.phi);
            std::array<double, 3> e{};
            const std::array<double, 3> dts{0.02, 0.01, 0.005};
            for (std::size_t k = 0; k < dts.size(); ++k) {
                e[k] = (stepwise_propagator(path, dts[k], params) - exact).norm();
            }
            return std::array<double, 2>{e[0] / e[1], e[1] / e[2]};
        });
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 4.0;
        bool ok = true;
        for (const auto& r : res) {
            for (double q : r) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
                if (!(std::abs(q - 4.0) <= std::abs(worst - 4.0))) {
                    worst = q;
                }
                ok = ok && q >= 3.5 && q <= 4.5;
            }
        }
        return Outcome{worst, ok, "8 drives, dt = 0.02, 0.01, 0.005; ratios span [" + sci(lo) + ", " + sci(hi) + "]"};
    });
}

CheckResult check_classical_cycle(std::uint64_t seed) {
    return run_check(9, "classical cycle closes with eta = 1 - T2/T1", "<= 1e-10", [seed] {
        Rng rng(seed ^ 0x09);
        std::vector<ClassicalSpec> specs;
        for (int i = 0; i < 100; ++i) {
            const double T1 = uniform(rng, 1.0, 1000.0);
            const double T2 = T1 * uniform(rng, 0.05, 0.95);
            const double cV = std::array<double, 3>{1.5, 2.5, 3.0}[static_cast<std::size_t>(uniform_int(rng, 0, 2))];
            const GasState initial{uniform(rng, 0.1, 10.0), T1, uniform(rng, 0.1, 10.0), uniform(rng, 0.1, 20.0), cV};
            specs.push_back(ClassicalSpec{T1, T2, uniform(rng, 0.01, 2.0), initial});
        }
        struct Errors {
            double closure;
            double efficiency;
            double spread;
        };
        const auto res = parallel_map(specs, [](const ClassicalSpec& s) {
            const ClassicalReport r = classical_cycle(s);
            const GasState& a = s.initial;
            const GasState& b = r.final_state;
            auto d = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(x)); };
            Errors e{};
            e.closure = std::max({d(a.N, b.N), d(a.T, b.T), d(a.V, b.V), d(a.S, b.S),
                                  std::abs(r.dS_in - r.dS_out) / std::max(1.0, r.dS_in),
                                  std::abs(r.W_net - (r.Q1 - r.Q2)) / std::max(1.0, r.Q1)});
            const double target = 1.0 - s.T2 / s.T1;
            e.efficiency = std::abs(r.efficiency - target);
            double lo = r.efficiency, hi = r.efficiency;
            for (double x : {0.05, 0.5, 1.5}) {
                ClassicalSpec other = s;
                other.add_fraction = x;
                const double eta = classical_cycle(other).efficiency;
                lo = std::min(lo, eta);
                hi = std::max(hi, eta);
                e.efficiency = std::max(e.efficiency, std::abs(eta - target));
            }
            e.spread = hi - lo;
            return e;
        });
        double closure = 0.0, eff = 0.0, spread = 0.0;
        for (const auto& e : res) {
            closure = std::max(closure, e.closure);
            eff = std::max(eff, e.efficiency);
            spread = std::max(spread, e.spread);
        }
        const double worst = std::max({closure, eff, spread});
        return Outcome{worst, worst <= 1e-10,
                       "100 specs; closure " + sci(closure) + ", |eta - (1 - T2/T1)| " + sci(eff) +
                           ", spread over fractions " + sci(spread)};
    });
}

CheckResult check_carnot_bound(std::uint64_t seed) {
    return run_check(10, "Otto efficiency within the Carnot bound", "eta - (1 - T_min/T_max) <= 0", [seed] {
        Rng rng(seed ^ 0x0a);
        std::vector<OttoSpec> specs;
        for (int i = 0; i < 200; ++i) {
            const double J2 = uniform(rng, 0.2, 2.0);
            const double J1 = J2 + uniform(rng, 0.1, 3.0);
            const double p0 = uniform(rng, 0.05, 0.45);
            const double gamma = random_sign(rng) * uniform(rng, 0.01, 0.9);
            // ln xi in (0, ln(1/p0 - 1) / 2) keeps xi > 1 and (1/p0 - 1) / xi^2 > 1.
            const double log_xi = uniform(rng, 0.05, 0.95) * 0.5 * std::log(1.0 / p0 - 1.0);
            const double root = std::sqrt(1.0 - gamma * gamma);
            const double phi1 = uniform(rng, -3.0, 3.0);
            specs.push_back(OttoSpec{J1, J2, phi1, phi1 + log_xi * root / gamma, p0, SystemParams(gamma)});
        }
        const auto res = parallel_map(specs, [](const OttoSpec& s) {
            const TemperatureRange range = corner_temperature_range(otto_corner_states(s));
            if (!(range.T_min > 0.0)) {
                return std::numeric_limits<double>::infinity();
            }
            return otto_efficiency(s) - (1.0 - range.T_min / range.T_max);
        });
        const double worst = *std::max_element(res.begin(), res.end());
        return Outcome{worst, worst <= 0.0, "200 specs in the restricted domain"};
    });
}

std::vector<CheckResult> run_acceptance_suite(std::uint64_t seed) {
    return {check_otto_efficiency(seed),
            check_closed_form_reproduction(seed),
            check_closed_loop_state_functions(seed),
            check_hermitian_triviality(seed),
            check_green_theorem(seed),
            check_biorthonormal_unitarity(seed),
            check_adiabatic_convergence(seed),
            check_oracle_convergence(seed),
            check_classical_cycle(seed),
            check_carnot_bound(seed)};
}

std::string format_result(const CheckResult& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", r.measured);
    return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": worst " + buf +
           " (require " + r.limit + "); " + r.detail;
}

}  // namespace nhqhe
