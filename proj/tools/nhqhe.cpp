// nhqhe: command-line front end.
//
//   nhqhe <mode> --config <path> [--out <dir>] [--precision <n>] [--sqrt-units]
//   nhqhe check [--seed <n>]
//
// Exit status: 0 success, 1 numerical failure, 2 configuration error.

#include "nhqhe/checks.hpp"
#include "nhqhe/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace nhqhe::cli;

    CLI::App app{"Simulator for a PT-symmetric two-level quantum heat engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int precision = 0;
    bool sqrt_units = false;
    std::uint64_t seed = nhqhe::kDefaultSeed;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config,-c", config_path, "TOML run configuration")->check(CLI::ExistingFile);
        if (config_required) {
            opt->required();
        }
        sub->add_option("--out,-o", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--precision,-p", precision, "significant digits in CSV output")->check(CLI::Range(1, 17));
        sub->add_flag("--sqrt-units", sqrt_units, "report energies in units of sqrt(1 - gamma^2)");
    };
    for (const char* m : {"eigs", "evolve", "otto", "loop", "classical"}) {
        add_common(app.add_subcommand(m, std::string("run the ") + m + " mode"), true);
    }
    CLI::App* check = app.add_subcommand("check", "run the randomized acceptance suite");
    add_common(check, false);
    check->add_option("--seed,-s", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const Mode mode = *parse_mode(sub->get_name());
    RunConfig cfg;
    try {
        cfg = config_path.empty() ? check_config(seed) : parse_config(config_path, mode);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (mode == Mode::check && sub->count("--seed") > 0) {
        cfg.check->seed = seed;
    }
    if (!out_dir.empty()) {
        cfg.output.dir = out_dir;
    }
    if (precision > 0) {
        cfg.output.precision = precision;
    }
    if (sqrt_units) {
        cfg.output.sqrt_units = true;
    }

    const RunResult res = run(cfg);
    if (!res.summary.empty()) {
        std::cout << res.summary << '\n';
    }
    for (const auto& f : res.written) {
        std::cout << "wrote " << f.string() << '\n';
    }
    if (res.exit_code != kExitOk) {
        std::cerr << "error: " << res.message << '\n';
    }
    return res.exit_code;
}
