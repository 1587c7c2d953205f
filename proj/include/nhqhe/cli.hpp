// cli.hpp: run configuration, CSV emission and orchestration behind the
// `nhqhe` command-line tool.

#pragma once

#include "nhqhe/classical.hpp"
#include "nhqhe/cycle.hpp"
#include "nhqhe/evolve.hpp"
#include "nhqhe/model.hpp"
#include "nhqhe/path.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nhqhe::cli {

enum class Mode { eigs, evolve, otto, loop, classical, check };

std::string_view mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

// Rejected configuration. The message starts with "<source>:<line>:<col>:"
// whenever the offending entry can be located.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    int precision = 12;
    bool sqrt_units = false;
    std::filesystem::path dir = ".";
};

struct EigsBlock {
    std::vector<ControlPoint> points;
};

struct EvolveBlock {
    std::vector<DriveSegment> segments;
    int samples = 50;  // rows per segment
    double threshold = kDefaultAdiabaticThreshold;
};

struct OttoBlock {
    OttoSpec spec;
    Orientation orientation = Orientation::forward;
};

struct LoopBlock {
    enum class Shape { polygon, ellipse };
    Shape shape = Shape::polygon;
    std::vector<PlanePoint> vertices;  // polygon
    PlanePoint center{1.0, 0.0};       // ellipse
    double a = 0.0;
    double b = 0.0;
    int pieces = 4;
    Preparation prep{0.5, 0.0};
    int samples = 64;  // rows per segment
};

struct CheckBlock {
    std::uint64_t seed = 0;
};

struct RunConfig {
    Mode mode = Mode::check;
    SystemParams params{0.0};
    OutputOptions output;
    double tol = 0.0;  // quadrature tolerance
    std::optional<EigsBlock> eigs;
    std::optional<EvolveBlock> evolve;
    std::optional<OttoBlock> otto;
    std::optional<LoopBlock> loop;
    std::optional<ClassicalSpec> classical;
    std::optional<CheckBlock> check;
};

// Tolerance used when the config leaves it unset: NHQHE_TOL if set and
// positive, else the library default.
double default_tolerance();

// `mode_override` comes from the command line; it must agree with a `mode`
// key in the file if both are given. Throws ConfigError.
RunConfig parse_config_string(std::string_view text, std::string_view source_name,
                              std::optional<Mode> mode_override = std::nullopt);
RunConfig parse_config(const std::filesystem::path& file, std::optional<Mode> mode_override = std::nullopt);

// Default configuration for `nhqhe check` without a file.
RunConfig check_config(std::uint64_t seed);

// --- CSV ---------------------------------------------------------------------

// Number at `precision` significant digits; infinities as "inf"/"-inf", NaN as "nan".
std::string format_number(double v, int precision);
// Inverse of format_number.
double parse_number(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws std::out_of_range if absent.
    std::size_t column(std::string_view name) const;
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& file);

// --- run ---------------------------------------------------------------------

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

struct RunResult {
    int exit_code = kExitOk;
    std::vector<std::filesystem::path> written;
    std::string summary;  // printed to stdout by the tool
    std::string message;  // diagnostic for a nonzero exit
};

// Runs the configured mode and writes its artifacts into config.output.dir.
RunResult run(const RunConfig& config);

}  // namespace nhqhe::cli
