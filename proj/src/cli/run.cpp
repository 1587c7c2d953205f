#include "nhqhe/checks.hpp"
#include "nhqhe/cli.hpp"
#include "nhqhe/errors.hpp"
#include "nhqhe/thermo.hpp"

#include <fmt/format.h>

#include <fstream>

namespace nhqhe::cli {

namespace {

class Emitter {
public:
    Emitter(const OutputOptions& opt, RunResult& result) : opt_(opt), result_(result) {}

    std::string num(double v) const { return format_number(v, opt_.precision); }
    std::string temp(const Temperature& T) const { return T.infinite ? "inf" : num(T.value); }
    std::string units_flag() const { return opt_.sqrt_units ? "true" : "false"; }

    void write(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(opt_.dir);
        const auto path = opt_.dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::filesystem::filesystem_error("cannot write output file", path,
                                                    std::make_error_code(std::errc::permission_denied));
        }
        out << content;
        if (!out.flush()) {
            throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
        }
        result_.written.push_back(path);
    }

    void write(const std::string& name, const CsvTable& table) { write(name, to_csv(table)); }

private:
    const OutputOptions& opt_;
    RunResult& result_;
};

void append_complex(std::vector<std::string>& row, const Emitter& e, const cplx& z) {
    row.push_back(e.num(z.real()));
    row.push_back(e.num(z.imag()));
}

void run_eigs(const RunConfig& cfg, Emitter& e, RunResult& res) {
    CsvTable t;
    t.header = {"J", "phi", "eps_plus", "eps_minus", "dirac_norm_theta", "pt_defect", "biorthonormal_defect"};
    for (const char* v : {"psi_plus", "psi_minus", "eta_plus", "eta_minus"}) {
        for (const char* c : {"1re", "1im", "2re", "2im"}) {
            t.header.push_back(std::string(v) + "_" + c);
        }
    }
    for (const ControlPoint& pt : cfg.eigs->points) {
        const EigenSystem es = eigensystem(cfg.params, pt);
        Matrix2 overlap;
        overlap << bracket(es.eta_plus, es.psi_plus), bracket(es.eta_plus, es.psi_minus),
            bracket(es.eta_minus, es.psi_plus), bracket(es.eta_minus, es.psi_minus);
        std::vector<std::string> row{e.num(pt.J),
                                     e.num(pt.phi),
                                     e.num(es.eps_plus),
                                     e.num(es.eps_minus),
                                     e.num(es.dirac_norm_theta),
                                     e.num(pt_defect(build_hamiltonian(cfg.params, pt))),
                                     e.num((overlap - Matrix2::Identity()).norm())};
        for (const Vector2* v : {&es.psi_plus, &es.psi_minus, &es.eta_plus, &es.eta_minus}) {
            append_complex(row, e, (*v)(0));
            append_complex(row, e, (*v)(1));
        }
        t.rows.push_back(std::move(row));
    }
    e.write("eigs.csv", t);
    res.summary = fmt::format("eigs: {} control points, eps_plus = J * {}", cfg.eigs->points.size(),
                              e.num(cfg.params.spectral_factor()));
}

void run_evolve(const RunConfig& cfg, Emitter& e, RunResult& res) {
    const EvolveBlock& b = *cfg.evolve;
    CsvTable t;
    t.header = {"segment", "tau", "phi", "U11re", "U11im", "U12re", "U12im", "U21re", "U21im", "U22re", "U22im",
                "defect", "margin"};
    auto add_row = [&](std::size_t seg, double tau, double phi, const Matrix2& U, const Matrix2& Ut, double margin) {
        std::vector<std::string> row{std::to_string(seg), e.num(tau), e.num(phi)};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                append_complex(row, e, U(i, j));
            }
        }
        row.push_back(e.num(PropagatorPair{U, Ut}.biorthonormal_defect()));
        row.push_back(e.num(margin));
        t.rows.push_back(std::move(row));
    };

    Matrix2 U = Matrix2::Identity(), Ut = Matrix2::Identity();
    double tau0 = 0.0, worst_margin = 0.0;
    add_row(0, 0.0, b.segments.front().phi_start, U, Ut, 0.0);
    for (std::size_t k = 0; k < b.segments.size(); ++k) {
        const DriveSegment& s = b.segments[k];
        const double margin = adiabaticity_margin(cfg.params, s.omega, 1.0).reduced;
        worst_margin = std::max(worst_margin, margin);
        for (int n = 1; n <= b.samples; ++n) {
            const double tau = s.tau * n / b.samples;
            add_row(k, tau0 + tau, s.phi_start + s.omega * tau,
                    exact_propagator(cfg.params, s.omega, tau, s.phi_start) * U,
                    left_propagator(cfg.params, s.omega, tau, s.phi_start) * Ut, margin);
        }
        const PropagatorPair seg = compose_segments(std::span(&s, 1), cfg.params);
        U = seg.U * U;
        Ut = seg.U_tilde * Ut;
        tau0 += s.tau;
    }
    e.write("evolve.csv", t);
    res.summary = fmt::format("evolve: {} segments, total tau {}, final defect {}, largest reduced margin {}",
                              b.segments.size(), e.num(tau0), e.num(PropagatorPair{U, Ut}.biorthonormal_defect()),
                              e.num(worst_margin));
    if (worst_margin > b.threshold) {
        res.summary += fmt::format("\nwarning: reduced adiabaticity margin {} exceeds threshold {}; "
                                   "adiabatic populations are not reliable for this drive",
                                   e.num(worst_margin), e.num(b.threshold));
    }
}

std::string otto_report(const OttoSpec& spec, const CycleReport& rep, const Emitter& e, bool sqrt_units) {
    std::string out;
    const std::string unit = sqrt_units ? " (energies and temperatures in units of sqrt(1 - gamma^2))" : "";
    out += fmt::format("Otto cycle  gamma = {}  J1 = {}  J2 = {}  phi1 = {}  phi2 = {}  p0 = {}  xi = {}\n",
                       e.num(spec.params.gamma()), e.num(spec.J1), e.num(spec.J2), e.num(spec.phi1),
                       e.num(spec.phi2), e.num(spec.p0), e.num(spec.xi()));
    out += fmt::format("orientation: {}\n\n", rep.orientation == Orientation::forward ? "forward" : "reversed");
    out += "Corner states" + unit + "\n";
    out += fmt::format("{:<6}{:>20}{:>20}{:>20}{:>20}{:>20}{:>20}\n", "point", "T", "eps_plus", "P_plus", "P_minus",
                       "U", "S");
    for (const auto& c : rep.corners) {
        out += fmt::format("{:<6}{:>20}{:>20}{:>20}{:>20}{:>20}{:>20}\n", std::string(1, c.label), e.temp(c.obs.T),
                           e.num(c.obs.eps_plus), e.num(c.obs.P_plus), e.num(c.obs.P_minus), e.num(c.obs.U),
                           e.num(c.obs.S));
    }
    out += "\nProcesses" + unit + "\n";
    out += fmt::format("{:<8}{:<22}{:>20}{:>20}{:>20}{:>20}{:>20}\n", "leg", "kind", "dT", "dU", "dQ", "dW", "dS");
    for (const auto& p : rep.processes) {
        out += fmt::format("{:<8}{:<22}{:>20}{:>20}{:>20}{:>20}{:>20}\n", p.leg, p.kind, e.num(p.dT), e.num(p.dU),
                           e.num(p.dQ), e.num(p.dW), e.num(p.dS));
    }
    out += fmt::format("{:<30}{:>20}{:>20}{:>20}{:>20}\n", "total", "", e.num(rep.totals.dU), e.num(rep.totals.dQ),
                       e.num(rep.totals.dW));
    out += fmt::format("\nloop entropy (Clausius) {}, state entropy change {}, closed {}\n", e.num(rep.totals.dS),
                       e.num(rep.totals.dS_state), rep.totals.closed_ok ? "yes" : "NO");
    out += fmt::format("efficiency {}  (1 - J2/J1 = {})\n", e.num(rep.efficiency), e.num(1.0 - spec.J2 / spec.J1));
    return out;
}

void run_otto(const RunConfig& cfg, Emitter& e, RunResult& res) {
    const OttoSpec& spec = cfg.otto->spec;
    const Units units = cfg.output.sqrt_units ? Units::sqrt_factor : Units::raw;
    const CycleReport rep = otto_cycle_report(spec, cfg.otto->orientation, units, cfg.tol);

    CsvTable corners;
    corners.header = {"point", "J", "phi", "T", "eps_plus", "P_plus", "P_minus", "U", "S", "sqrt_units"};
    for (const auto& c : rep.corners) {
        corners.rows.push_back({std::string(1, c.label), e.num(c.J), e.num(c.phi), e.temp(c.obs.T),
                                e.num(c.obs.eps_plus), e.num(c.obs.P_plus), e.num(c.obs.P_minus), e.num(c.obs.U),
                                e.num(c.obs.S), e.units_flag()});
    }
    CsvTable processes;
    processes.header = {"leg", "kind", "dT", "dU", "dQ", "dW", "dS", "sqrt_units"};
    for (const auto& p : rep.processes) {
        processes.rows.push_back(
            {p.leg, p.kind, e.num(p.dT), e.num(p.dU), e.num(p.dQ), e.num(p.dW), e.num(p.dS), e.units_flag()});
    }
    e.write("corners.csv", corners);
    e.write("processes.csv", processes);
    const std::string report = otto_report(spec, rep, e, cfg.output.sqrt_units);
    e.write("report.txt", report);
    res.summary = report;
}

// Sub-curve of `seg` over parameter values [s0, s1], reparametrized to [0, 1].
PathSegment restrict_segment(const PathSegment& seg, double s0, double s1) {
    return PathSegment{[at = seg.at, s0, s1](double u) {
                           CurveSample c = at(s0 + (s1 - s0) * u);
                           c.dJ *= s1 - s0;
                           c.dphi *= s1 - s0;
                           return c;
                       },
                       seg.smooth, seg.label};
}

void run_loop(const RunConfig& cfg, Emitter& e, RunResult& res) {
    const LoopBlock& b = *cfg.loop;
    const ControlPath path = b.shape == LoopBlock::Shape::polygon ? polyline(b.vertices, true)
                                                                  : ellipse(b.center, b.a, b.b, b.pieces);
    CsvTable t;
    t.header = {"s", "J", "phi", "P_plus", "P_minus", "T", "U", "S", "Q", "W"};
    double Q = 0.0, W = 0.0;
    auto add_row = [&](double s, const CurveSample& c) {
        const ThermoObservables obs = observables(prepare_state(cfg.params, b.prep, ControlPoint(c.J, c.phi)), cfg.params);
        t.rows.push_back({e.num(s), e.num(c.J), e.num(c.phi), e.num(obs.P_plus), e.num(obs.P_minus), e.temp(obs.T),
                          e.num(obs.U), e.num(obs.S), e.num(Q), e.num(W)});
    };
    add_row(0.0, path.segments().front().at(0.0));
    const auto& segs = path.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        for (int n = 1; n <= b.samples; ++n) {
            const double s0 = static_cast<double>(n - 1) / b.samples, s1 = static_cast<double>(n) / b.samples;
            const ControlPath piece({restrict_segment(segs[k], s0, s1)}, false);
            Q += heat_line_integral(piece, b.prep, cfg.params, cfg.tol);
            W += work_line_integral(piece, b.prep, cfg.params, cfg.tol);
            add_row(static_cast<double>(k) + s1, segs[k].at(s1));
        }
    }
    const LoopTotals tot = generic_loop_report(path, b.prep, cfg.params, cfg.tol);
    CsvTable totals;
    totals.header = {"net_Q", "net_W", "net_U", "net_S", "net_S_state", "energy_scale", "closed_ok"};
    totals.rows.push_back({e.num(tot.dQ), e.num(tot.dW), e.num(tot.dU), e.num(tot.dS), e.num(tot.dS_state),
                           e.num(tot.energy_scale), tot.closed_ok ? "true" : "false"});
    e.write("loop.csv", t);
    e.write("loop_totals.csv", totals);
    res.summary = fmt::format("loop: {} segments, net Q {}, net W {}, net U {}, net S {}", segs.size(), e.num(tot.dQ),
                              e.num(tot.dW), e.num(tot.dU), e.num(tot.dS));
    if (!tot.closed_ok) {
        throw NumericalError("loop totals do not close: net U " + e.num(tot.dU) + ", net S " + e.num(tot.dS));
    }
}

void run_classical(const RunConfig& cfg, Emitter& e, RunResult& res) {
    const ClassicalSpec& spec = *cfg.classical;
    const ClassicalReport r = classical_cycle(spec);
    CsvTable t;
    t.header = {"step", "N", "T", "V", "S", "Q", "W"};
    auto row = [&](const char* step, const GasState& g, double Q, double W) {
        t.rows.push_back({step, e.num(g.N), e.num(g.T), e.num(g.V), e.num(g.S), e.num(Q), e.num(W)});
    };
    // Q is heat into the gas, W is work done by the gas.
    row("start", spec.initial, 0.0, 0.0);
    row("isothermal_add", r.after_add, r.Q1, 0.0);
    row("adiabatic_expand", r.after_expand, 0.0, r.W_expand);
    row("isothermal_remove", r.after_remove, -r.Q2, 0.0);
    row("adiabatic_compress", r.final_state, 0.0, -r.W_compress);
    e.write("classical.csv", t);

    std::string report;
    report += fmt::format("classical cycle  T1 = {}  T2 = {}  added fraction = {}\n", e.num(spec.T1), e.num(spec.T2),
                          e.num(spec.add_fraction));
    report += fmt::format("Q1 (in with added gas)      {}\n", e.num(r.Q1));
    report += fmt::format("Q2 (out with removed gas)   {}\n", e.num(r.Q2));
    report += fmt::format("W_net = Q1 - Q2             {}\n", e.num(r.W_net));
    report += fmt::format("W_mech (adiabats)           {}\n", e.num(r.W_mech));
    report += fmt::format("internal energy in / out    {} / {}\n", e.num(r.E_in), e.num(r.E_out));
    report += fmt::format("entropy in / out            {} / {}\n", e.num(r.dS_in), e.num(r.dS_out));
    report += fmt::format("efficiency                  {}  (1 - T2/T1 = {})\n", e.num(r.efficiency),
                          e.num(1.0 - spec.T2 / spec.T1));
    e.write("report.txt", report);
    res.summary = report;
}

void run_check(const RunConfig& cfg, Emitter& e, RunResult& res) {
    const auto results = run_acceptance_suite(cfg.check->seed);
    CsvTable t;
    t.header = {"id", "name", "passed", "measured", "limit", "detail"};
    int failed = 0;
    for (const auto& r : results) {
        t.rows.push_back({std::to_string(r.id), r.name, r.passed ? "true" : "false", e.num(r.measured), r.limit,
                          r.detail});
        res.summary += format_result(r) + "\n";
        failed += r.passed ? 0 : 1;
    }
    res.summary += fmt::format("{} of {} checks failed (seed {})", failed, results.size(), cfg.check->seed);
    e.write("check.csv", t);
    if (failed > 0) {
        res.exit_code = kExitNumerical;
        res.message = fmt::format("{} acceptance checks failed", failed);
    }
}

}  // namespace

RunResult run(const RunConfig& config) {
    RunResult res;
    Emitter e(config.output, res);
    try {
        switch (config.mode) {
            case Mode::eigs:
                run_eigs(config, e, res);
                break;
            case Mode::evolve:
                run_evolve(config, e, res);
                break;
            case Mode::otto:
                run_otto(config, e, res);
                break;
            case Mode::loop:
                run_loop(config, e, res);
                break;
            case Mode::classical:
                run_classical(config, e, res);
                break;
            case Mode::check:
                run_check(config, e, res);
                break;
        }
    } catch (const std::filesystem::filesystem_error& ex) {
        res.exit_code = kExitConfig;
        res.message = ex.what();
    } catch (const DomainError& ex) {
        res.exit_code = kExitConfig;
        res.message = std::string(mode_name(config.mode)) + ": " + ex.what();
    } catch (const std::exception& ex) {
        res.exit_code = kExitNumerical;
        res.message = std::string(mode_name(config.mode)) + ": numerical failure: " + ex.what();
    }
    return res;
}

}  // namespace nhqhe::cli
