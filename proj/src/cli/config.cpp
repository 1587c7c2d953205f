#include "nhqhe/checks.hpp"
#include "nhqhe/cli.hpp"
#include "nhqhe/errors.hpp"

#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace nhqhe::cli {

namespace {

constexpr std::array<std::pair<Mode, std::string_view>, 6> kModes{{{Mode::eigs, "eigs"},
                                                                   {Mode::evolve, "evolve"},
                                                                   {Mode::otto, "otto"},
                                                                   {Mode::loop, "loop"},
                                                                   {Mode::classical, "classical"},
                                                                   {Mode::check, "check"}}};

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const toml::node* at, const std::string& msg) const {
        std::ostringstream os;
        os << source_;
        if (at != nullptr && at->source().begin) {
            os << ':' << at->source().begin.line << ':' << at->source().begin.column;
        }
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void only_keys(const toml::table& t, std::string_view where, std::initializer_list<std::string_view> allowed) const {
        for (const auto& [key, node] : t) {
            if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
                fail(&node, "unknown key '" + std::string(key.str()) + "' in " + std::string(where));
            }
        }
    }

    const toml::table* table(const toml::table& parent, std::string_view key) const {
        const toml::node* n = parent.get(key);
        if (n == nullptr) {
            return nullptr;
        }
        if (!n->is_table()) {
            fail(n, "'" + std::string(key) + "' must be a table");
        }
        return n->as_table();
    }

    double number(const toml::table& t, std::string_view where, std::string_view key,
                  std::optional<double> fallback = std::nullopt) const {
        const toml::node* n = t.get(key);
        if (n == nullptr) {
            if (!fallback) {
                fail(&t, "missing required key " + std::string(where) + "." + std::string(key));
            }
            return *fallback;
        }
        return number(*n, std::string(where) + "." + std::string(key));
    }

    double number(const toml::node& n, const std::string& what) const {
        const std::optional<double> v = n.value<double>();
        if (!v || !std::isfinite(*v)) {
            fail(&n, what + " must be a finite number");
        }
        return *v;
    }

    std::int64_t integer(const toml::table& t, std::string_view where, std::string_view key,
                         std::int64_t fallback) const {
        const toml::node* n = t.get(key);
        if (n == nullptr) {
            return fallback;
        }
        if (!n->is_integer()) {
            fail(n, std::string(where) + "." + std::string(key) + " must be an integer");
        }
        return *n->value<std::int64_t>();
    }

    bool boolean(const toml::table& t, std::string_view where, std::string_view key, bool fallback) const {
        const toml::node* n = t.get(key);
        if (n == nullptr) {
            return fallback;
        }
        if (!n->is_boolean()) {
            fail(n, std::string(where) + "." + std::string(key) + " must be true or false");
        }
        return *n->value<bool>();
    }

    std::optional<std::string> string(const toml::table& t, std::string_view where, std::string_view key) const {
        const toml::node* n = t.get(key);
        if (n == nullptr) {
            return std::nullopt;
        }
        if (!n->is_string()) {
            fail(n, std::string(where) + "." + std::string(key) + " must be a string");
        }
        return *n->value<std::string>();
    }

    PlanePoint pair(const toml::node& n, const std::string& what) const {
        const toml::array* a = n.as_array();
        if (a == nullptr || a->size() != 2) {
            fail(&n, what + " must be a [J, phi] pair");
        }
        return PlanePoint{number(*a->get(0), what + "[0]"), number(*a->get(1), what + "[1]")};
    }

    std::vector<PlanePoint> pairs(const toml::table& t, std::string_view where, std::string_view key) const {
        const std::string what = std::string(where) + "." + std::string(key);
        const toml::node* n = t.get(key);
        if (n == nullptr) {
            fail(&t, "missing required key " + what);
        }
        const toml::array* a = n->as_array();
        if (a == nullptr) {
            fail(n, what + " must be an array of [J, phi] pairs");
        }
        std::vector<PlanePoint> out;
        for (std::size_t i = 0; i < a->size(); ++i) {
            out.push_back(pair(*a->get(i), what + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    // Runs `f`, re-raising library domain errors at the given node.
    template <class F>
    auto guarded(const toml::node* at, const std::string& what, F f) const {
        try {
            return f();
        } catch (const DomainError& e) {
            fail(at, what + ": " + e.what());
        }
    }

private:
    std::string source_;
};

const toml::node* key_node(const toml::table& t, std::string_view key) {
    const toml::node* n = t.get(key);
    return n != nullptr ? n : &t;
}

SystemParams parse_system(const Reader& r, const toml::table* sys, bool gamma_required) {
    if (sys == nullptr) {
        if (gamma_required) {
            r.fail(nullptr, "missing [system] table with gamma");
        }
        return SystemParams(0.0);
    }
    r.only_keys(*sys, "[system]", {"gamma", "kB"});
    const double gamma = r.number(*sys, "system", "gamma", gamma_required ? std::nullopt : std::optional(0.0));
    const double kB = r.number(*sys, "system", "kB", 1.0);
    return r.guarded(key_node(*sys, "gamma"), "system.gamma = " + std::to_string(gamma),
                     [&] { return SystemParams(gamma, kB); });
}

OutputOptions parse_output(const Reader& r, const toml::table* out) {
    OutputOptions o;
    if (out == nullptr) {
        return o;
    }
    r.only_keys(*out, "[output]", {"precision", "sqrt_units", "dir"});
    const std::int64_t p = r.integer(*out, "output", "precision", o.precision);
    if (p < 1 || p > 17) {
        r.fail(key_node(*out, "precision"), "output.precision must lie in [1, 17]");
    }
    o.precision = static_cast<int>(p);
    o.sqrt_units = r.boolean(*out, "output", "sqrt_units", false);
    if (auto dir = r.string(*out, "output", "dir")) {
        o.dir = *dir;
    }
    return o;
}

EigsBlock parse_eigs(const Reader& r, const toml::table& t) {
    r.only_keys(t, "[eigs]", {"points"});
    EigsBlock b;
    const auto pts = r.pairs(t, "eigs", "points");
    if (pts.empty()) {
        r.fail(key_node(t, "points"), "eigs.points must not be empty");
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        b.points.push_back(r.guarded(key_node(t, "points"), "eigs.points[" + std::to_string(i) + "]",
                                     [&] { return ControlPoint(pts[i].J, pts[i].phi); }));
    }
    return b;
}

EvolveBlock parse_evolve(const Reader& r, const toml::table& t) {
    r.only_keys(t, "[evolve]", {"phi0", "samples", "threshold", "segments"});
    EvolveBlock b;
    const double phi0 = r.number(t, "evolve", "phi0", 0.0);
    const std::int64_t samples = r.integer(t, "evolve", "samples", b.samples);
    if (samples < 1 || samples > 1000000) {
        r.fail(key_node(t, "samples"), "evolve.samples must lie in [1, 1000000]");
    }
    b.samples = static_cast<int>(samples);
    b.threshold = r.number(t, "evolve", "threshold", b.threshold);
    if (!(b.threshold > 0.0)) {
        r.fail(key_node(t, "threshold"), "evolve.threshold must be positive");
    }
    const toml::node* segs = t.get("segments");
    if (segs == nullptr || !segs->is_array_of_tables() || segs->as_array()->empty()) {
        r.fail(segs != nullptr ? segs : &t, "evolve needs at least one [[evolve.segments]] entry");
    }
    double phi = phi0;
    const toml::array& arr = *segs->as_array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const toml::table& s = *arr.get(i)->as_table();
        const std::string where = "evolve.segments[" + std::to_string(i) + "]";
        r.only_keys(s, where, {"omega", "tau", "phi_start"});
        DriveSegment seg{r.number(s, where, "omega"), r.number(s, where, "tau"), r.number(s, where, "phi_start", phi)};
        if (seg.tau < 0.0) {
            r.fail(key_node(s, "tau"), where + ".tau must be non-negative");
        }
        b.segments.push_back(seg);
        phi = seg.phi_end();
    }
    // Contiguity in phi does not depend on gamma.
    r.guarded(segs, "evolve.segments", [&] {
        compose_segments(b.segments, SystemParams(0.0));
        return 0;
    });
    return b;
}

OttoBlock parse_otto(const Reader& r, const toml::table& t, const SystemParams& params) {
    r.only_keys(t, "[otto]", {"J1", "J2", "phi1", "phi2", "p0", "orientation"});
    OttoBlock b{OttoSpec{r.number(t, "otto", "J1"), r.number(t, "otto", "J2"), r.number(t, "otto", "phi1", 0.0),
                         r.number(t, "otto", "phi2"), r.number(t, "otto", "p0", 0.25), params},
                Orientation::forward};
    if (auto o = r.string(t, "otto", "orientation")) {
        if (*o == "forward") {
            b.orientation = Orientation::forward;
        } else if (*o == "reversed") {
            b.orientation = Orientation::reversed;
        } else {
            r.fail(t.get("orientation"), "otto.orientation must be \"forward\" or \"reversed\"");
        }
    }
    const toml::node* at = &t;
    if (!(b.spec.J2 > 0.0)) {
        at = t.get("J2");
    } else if (!(b.spec.J1 > b.spec.J2)) {
        at = t.get("J1");
    } else if (!(b.spec.p0 > 0.0 && b.spec.p0 < 1.0)) {
        at = key_node(t, "p0");
    } else if (b.spec.phi1 == b.spec.phi2) {
        at = t.get("phi2");
    }
    r.guarded(at, "[otto]", [&] {
        b.spec.validate();
        return 0;
    });
    if (params.gamma() == 0.0) {
        r.fail(key_node(t, "phi2"), "otto mode needs gamma != 0: at gamma = 0 no heat is exchanged");
    }
    return b;
}

LoopBlock parse_loop(const Reader& r, const toml::table& t) {
    r.only_keys(t, "[loop]", {"shape", "vertices", "center", "a", "b", "pieces", "p0", "phi0", "samples"});
    LoopBlock b;
    const std::string shape = r.string(t, "loop", "shape").value_or("polygon");
    if (shape == "polygon") {
        b.shape = LoopBlock::Shape::polygon;
        b.vertices = r.pairs(t, "loop", "vertices");
        if (b.vertices.size() < 3) {
            r.fail(key_node(t, "vertices"), "loop.vertices needs at least three points");
        }
        for (const auto& v : b.vertices) {
            if (!(v.J > 0.0)) {
                r.fail(t.get("vertices"), "loop.vertices must have J > 0");
            }
        }
    } else if (shape == "ellipse") {
        b.shape = LoopBlock::Shape::ellipse;
        const toml::node* c = t.get("center");
        if (c == nullptr) {
            r.fail(&t, "missing required key loop.center");
        }
        b.center = r.pair(*c, "loop.center");
        b.a = r.number(t, "loop", "a");
        b.b = r.number(t, "loop", "b");
        const std::int64_t pieces = r.integer(t, "loop", "pieces", b.pieces);
        if (pieces < 1 || pieces > 1024) {
            r.fail(key_node(t, "pieces"), "loop.pieces must lie in [1, 1024]");
        }
        b.pieces = static_cast<int>(pieces);
        if (!(b.a > 0.0) || b.b == 0.0) {
            r.fail(key_node(t, "a"), "loop ellipse needs a > 0 and b != 0");
        }
        if (!(b.center.J - b.a > 0.0)) {
            r.fail(key_node(t, "a"), "loop ellipse leaves the J > 0 half-plane (center J - a <= 0)");
        }
    } else {
        r.fail(t.get("shape"), "loop.shape must be \"polygon\" or \"ellipse\"");
    }
    const double start_phi = b.shape == LoopBlock::Shape::polygon ? b.vertices.front().phi : b.center.phi;
    b.prep = Preparation{r.number(t, "loop", "p0"), r.number(t, "loop", "phi0", start_phi)};
    if (!(b.prep.p0 > 0.0 && b.prep.p0 < 1.0)) {
        r.fail(t.get("p0"), "loop.p0 must lie in (0, 1)");
    }
    const std::int64_t samples = r.integer(t, "loop", "samples", b.samples);
    if (samples < 1 || samples > 100000) {
        r.fail(key_node(t, "samples"), "loop.samples must lie in [1, 100000]");
    }
    b.samples = static_cast<int>(samples);
    return b;
}

ClassicalSpec parse_classical(const Reader& r, const toml::table& t, const SystemParams& params) {
    r.only_keys(t, "[classical]", {"T1", "T2", "add_fraction", "N", "V", "S", "cV"});
    const double T1 = r.number(t, "classical", "T1");
    ClassicalSpec spec{T1,
                       r.number(t, "classical", "T2"),
                       r.number(t, "classical", "add_fraction"),
                       GasState{r.number(t, "classical", "N", 1.0), T1, r.number(t, "classical", "V", 1.0),
                                r.number(t, "classical", "S", 10.0), r.number(t, "classical", "cV", 1.5)},
                       params.kB()};
    const toml::node* at = &t;
    if (!(spec.T2 > 0.0) || !(spec.T1 > spec.T2)) {
        at = t.get("T2");
    } else if (!(spec.add_fraction > 0.0)) {
        at = t.get("add_fraction");
    }
    r.guarded(at, "[classical]", [&] {
        spec.validate();
        return 0;
    });
    return spec;
}

}  // namespace

std::string_view mode_name(Mode m) {
    for (const auto& [mode, name] : kModes) {
        if (mode == m) {
            return name;
        }
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
    for (const auto& [mode, n] : kModes) {
        if (n == name) {
            return mode;
        }
    }
    return std::nullopt;
}

double default_tolerance() {
    if (const char* env = std::getenv("NHQHE_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) {
            return v;
        }
    }
    return kDefaultQuadratureTol;
}

RunConfig parse_config_string(std::string_view text, std::string_view source_name, std::optional<Mode> mode_override) {
    const Reader r{std::string(source_name)};
    toml::table root;
    try {
        root = toml::parse(text, source_name);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source_name << ':' << e.source().begin.line << ':' << e.source().begin.column << ": "
           << e.description();
        throw ConfigError(os.str());
    }
    r.only_keys(root, "top level",
                {"mode", "tol", "system", "output", "eigs", "evolve", "otto", "loop", "classical", "check"});

    std::optional<Mode> mode = mode_override;
    if (auto m = r.string(root, "top level", "mode")) {
        const auto parsed = parse_mode(*m);
        if (!parsed) {
            r.fail(root.get("mode"), "unknown mode '" + *m + "'");
        }
        if (mode && *mode != *parsed) {
            r.fail(root.get("mode"), "mode '" + *m + "' in the file contradicts the requested mode '" +
                                         std::string(mode_name(*mode)) + "'");
        }
        mode = parsed;
    }
    if (!mode) {
        r.fail(nullptr, "missing mode: set `mode = \"...\"` or pass it on the command line");
    }

    RunConfig cfg;
    cfg.mode = *mode;
    for (const auto& [m, name] : kModes) {
        if (m != cfg.mode && root.get(name) != nullptr) {
            r.fail(root.get(name), "[" + std::string(name) + "] block given but the mode is '" +
                                       std::string(mode_name(cfg.mode)) + "'; exactly one mode block is allowed");
        }
    }
    const toml::table* block = r.table(root, mode_name(cfg.mode));
    if (block == nullptr && cfg.mode != Mode::check) {
        r.fail(nullptr, "missing [" + std::string(mode_name(cfg.mode)) + "] block");
    }

    const bool needs_gamma = cfg.mode != Mode::classical && cfg.mode != Mode::check;
    cfg.params = parse_system(r, r.table(root, "system"), needs_gamma);
    cfg.output = parse_output(r, r.table(root, "output"));
    cfg.tol = r.number(root, "top level", "tol", default_tolerance());
    if (!(cfg.tol > 0.0)) {
        r.fail(root.get("tol"), "tol must be positive");
    }

    switch (cfg.mode) {
        case Mode::eigs:
            cfg.eigs = parse_eigs(r, *block);
            break;
        case Mode::evolve:
            cfg.evolve = parse_evolve(r, *block);
            break;
        case Mode::otto:
            cfg.otto = parse_otto(r, *block, cfg.params);
            break;
        case Mode::loop:
            cfg.loop = parse_loop(r, *block);
            break;
        case Mode::classical:
            cfg.classical = parse_classical(r, *block, cfg.params);
            break;
        case Mode::check: {
            CheckBlock c{kDefaultSeed};
            if (block != nullptr) {
                r.only_keys(*block, "[check]", {"seed"});
                const std::int64_t seed = r.integer(*block, "check", "seed", static_cast<std::int64_t>(kDefaultSeed));
                if (seed < 0) {
                    r.fail(block->get("seed"), "check.seed must be non-negative");
                }
                c.seed = static_cast<std::uint64_t>(seed);
            }
            cfg.check = c;
            break;
        }
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& file, std::optional<Mode> mode_override) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ConfigError(file.string() + ": cannot open config file");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_string(text.str(), file.string(), mode_override);
}

RunConfig check_config(std::uint64_t seed) {
    RunConfig cfg;
    cfg.mode = Mode::check;
    cfg.tol = default_tolerance();
    cfg.check = CheckBlock{seed};
    return cfg;
}

}  // namespace nhqhe::cli
