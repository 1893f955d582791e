#include "stableheat/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what)
{
    throw ValidationError("config: " + where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed)
{
    if (!obj.is_object())
        bad(where, "expected a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key)
                known = true;
        if (!known)
            bad(where, "unknown key \"" + item.key() + "\"");
    }
}

double get_number(const json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key))
        bad(where, std::string("missing required key \"") + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number())
        bad(where, std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const char* key, double fallback)
{
    return obj.contains(key) ? get_number(obj, where, key) : fallback;
}

int get_int(const json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key))
        bad(where, std::string("missing required key \"") + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        bad(where, std::string("\"") + key + "\" must be an integer");
    return v.get<int>();
}

int get_int_or(const json& obj, const std::string& where, const char* key, int fallback)
{
    return obj.contains(key) ? get_int(obj, where, key) : fallback;
}

std::uint64_t get_seed_or(const json& obj, const std::string& where, const char* key,
                          std::uint64_t fallback)
{
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned())
        bad(where, std::string("\"") + key + "\" must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const char* key)
{
    const json& v = obj.at(key);
    if (!v.is_string())
        bad(where, std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& where, const char* key)
{
    const json& v = obj.at(key);
    if (!v.is_boolean())
        bad(where, std::string("\"") + key + "\" must be a boolean");
    return v.get<bool>();
}

std::vector<double> get_vector(const json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key))
        bad(where, std::string("missing required key \"") + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty())
        bad(where, std::string("\"") + key + "\" must be a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& entry : v) {
        if (!entry.is_number())
            bad(where, std::string("\"") + key + "\" must contain only numbers");
        out.push_back(entry.get<double>());
    }
    return out;
}

U0Spec parse_u0(const json& obj, const std::string& where)
{
    U0Spec u0;
    if (!obj.contains("type"))
        bad(where, "missing required key \"type\"");
    const std::string type = get_string(obj, where, "type");
    if (type == "constant") {
        reject_unknown_keys(obj, where, {"type", "value"});
        u0.kind = U0Spec::Kind::Constant;
        u0.value = get_number_or(obj, where, "value", 1.0);
    } else if (type == "indicator") {
        reject_unknown_keys(obj, where, {"type", "lower", "upper"});
        u0.kind = U0Spec::Kind::Indicator;
        u0.support.lower = get_vector(obj, where, "lower");
        u0.support.upper = get_vector(obj, where, "upper");
    } else if (type == "sine") {
        reject_unknown_keys(obj, where, {"type"});
        u0.kind = U0Spec::Kind::Sine;
    } else {
        bad(where, "\"type\" must be one of constant, indicator, sine");
    }
    return u0;
}

SolverConfig parse_solver(const json& obj, double p)
{
    const std::string where = "solver";
    reject_unknown_keys(obj, where,
                        {"mode", "N_max", "t", "time_steps", "points", "drift_enabled", "u0"});
    SolverConfig s;
    if (obj.contains("mode")) {
        const std::string mode = get_string(obj, where, "mode");
        if (mode == "star")
            s.mode = ProductMode::Star;
        else if (mode == "diamond")
            s.mode = ProductMode::Diamond;
        else
            bad(where, "\"mode\" must be star or diamond");
        s.mode_given = true;
    } else {
        s.mode = p < 1.0 ? ProductMode::Star : ProductMode::Diamond;
    }
    s.n_max = get_int(obj, where, "N_max");
    s.t = get_number(obj, where, "t");
    s.time_steps = get_int(obj, where, "time_steps");
    if (!obj.contains("points"))
        bad(where, "missing required key \"points\"");
    const json& pts = obj.at("points");
    if (!pts.is_array() || pts.empty())
        bad(where, "\"points\" must be a nonempty array of points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const json& entry = pts.at(i);
        if (!entry.is_array() || entry.empty())
            bad(where, "points[" + std::to_string(i) + "] must be a nonempty number array");
        Point point;
        for (const auto& coord : entry) {
            if (!coord.is_number())
                bad(where, "points[" + std::to_string(i) + "] must contain only numbers");
            point.push_back(coord.get<double>());
        }
        s.points.push_back(std::move(point));
    }
    if (obj.contains("drift_enabled")) {
        s.drift_enabled = get_bool(obj, where, "drift_enabled");
        s.drift_given = true;
    } else {
        s.drift_enabled = p > 1.0;
    }
    if (obj.contains("u0"))
        s.u0 = parse_u0(obj.at("u0"), "solver.u0");
    return s;
}

} // namespace

void U0Spec::validate(const BoxDomain& domain) const
{
    switch (kind) {
    case Kind::Constant:
        if (!std::isfinite(value) || std::abs(value) > 1.0)
            throw ValidationError("config: solver.u0: constant value must satisfy |value| <= 1");
        break;
    case Kind::Indicator: {
        support.validate();
        if (support.dim() != domain.dim())
            throw ValidationError("config: solver.u0: indicator box dimension differs from "
                                  "the domain");
        for (int a = 0; a < domain.dim(); ++a)
            if (support.lower[a] < domain.lower[a] || support.upper[a] > domain.upper[a])
                throw ValidationError("config: solver.u0: indicator box must lie inside the "
                                      "domain");
        break;
    }
    case Kind::Sine:
        break;
    }
}

ScalarField U0Spec::make(const BoxDomain& domain) const
{
    switch (kind) {
    case Kind::Constant: {
        const double c = value;
        return [c](PointView) { return c; };
    }
    case Kind::Indicator: {
        const BoxDomain box = support;
        return [box](PointView y) { return box.contains(y) ? 1.0 : 0.0; };
    }
    case Kind::Sine:
    default: {
        const BoxDomain box = domain;
        return [box](PointView y) {
            double prod = 1.0;
            for (std::size_t a = 0; a < y.size(); ++a) {
                const double len = box.upper[a] - box.lower[a];
                prod *= std::sin(std::numbers::pi * (y[a] - box.lower[a]) / len);
            }
            return prod;
        };
    }
    }
}

void RunConfig::validate() const
{
    noise.validate();
    domain.validate();
    if (kernel_mode == BoundaryMode::Dirichlet && image_order < 1)
        throw ValidationError("config: kernel: image_order must be >= 1 in dirichlet mode");
    if (space_grid_resolution < 1)
        throw ValidationError("config: kernel: space_grid_resolution must be >= 1");
    if (mc.q < 1.0 || mc.q > 2.0)
        throw ValidationError("config: mc: q must lie in [1, 2]");
    if (mc.replicates < 1)
        throw ValidationError("config: mc: replicates must be >= 1");
    if (!solver)
        return;
    const SolverConfig& s = *solver;
    if (s.n_max < 0)
        throw ValidationError("config: solver: N_max must be >= 0");
    if (!(s.t > 0.0) || !std::isfinite(s.t))
        throw ValidationError("config: solver: t must be positive");
    if (s.time_steps < 1)
        throw ValidationError("config: solver: time_steps must be >= 1");
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (static_cast<int>(s.points[i].size()) != domain.dim())
            throw ValidationError("config: solver: points[" + std::to_string(i) +
                                  "] has dimension different from the domain");
        if (!domain.contains(s.points[i]))
            throw ValidationError("config: solver: points[" + std::to_string(i) +
                                  "] lies outside the domain");
    }
    if (s.drift_enabled) {
        if (noise.p <= 1.0)
            throw ValidationError("config: solver: drift_enabled requires p > 1 "
                                  "(no compensator exists for p < 1)");
        if (s.mode != ProductMode::Diamond)
            throw ValidationError("config: solver: drift_enabled requires diamond mode");
    }
    s.u0.validate(domain);
}

KernelSpec RunConfig::kernel_spec() const
{
    KernelSpec spec;
    spec.domain = domain;
    spec.mode = kernel_mode;
    spec.image_order = image_order;
    return spec;
}

SpaceGrid RunConfig::space_grid() const
{
    return SpaceGrid::midpoint(domain, space_grid_resolution);
}

Grids RunConfig::grids() const
{
    const SolverConfig& s = solver_required("grids");
    Grids g;
    g.time = TimeGrid{s.t, s.time_steps};
    g.space = space_grid();
    return g;
}

DriftChannel RunConfig::drift_channel() const
{
    DriftChannel drift;
    const SolverConfig& s = solver_required("drift_channel");
    drift.enabled = s.drift_enabled;
    if (drift.enabled) {
        drift.density = compensator_density(noise);
        drift.grid = space_grid();
    }
    return drift;
}

const SolverConfig& RunConfig::solver_required(const char* subcommand) const
{
    if (!solver)
        throw ValidationError(std::string("config: a \"solver\" section is required by ") +
                              subcommand);
    return *solver;
}

RunConfig config_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ValidationError(std::string("config: not valid JSON: ") + err.what());
    }
    reject_unknown_keys(doc, "top level",
                        {"noise", "domain", "kernel", "solver", "mc", "output"});
    if (!doc.contains("noise"))
        bad("top level", "missing required section \"noise\"");
    if (!doc.contains("domain"))
        bad("top level", "missing required section \"domain\"");

    RunConfig config;

    const json& noise = doc.at("noise");
    reject_unknown_keys(noise, "noise", {"p", "c_p", "eps", "K", "seed"});
    config.noise.p = get_number(noise, "noise", "p");
    config.noise.c_p = get_number_or(noise, "noise", "c_p", 1.0);
    config.noise.eps = get_number(noise, "noise", "eps");
    config.noise.K = get_number(noise, "noise", "K");
    config.noise_seed = get_seed_or(noise, "noise", "seed", 1);

    const json& domain = doc.at("domain");
    reject_unknown_keys(domain, "domain", {"lower", "upper"});
    config.domain.lower = get_vector(domain, "domain", "lower");
    config.domain.upper = get_vector(domain, "domain", "upper");

    if (doc.contains("kernel")) {
        const json& kernel = doc.at("kernel");
        reject_unknown_keys(kernel, "kernel", {"mode", "image_order", "space_grid_resolution"});
        if (kernel.contains("mode")) {
            const std::string mode = get_string(kernel, "kernel", "mode");
            if (mode == "free")
                config.kernel_mode = BoundaryMode::Free;
            else if (mode == "dirichlet")
                config.kernel_mode = BoundaryMode::Dirichlet;
            else
                bad("kernel", "\"mode\" must be free or dirichlet");
        }
        config.image_order = get_int_or(kernel, "kernel", "image_order", 8);
        config.space_grid_resolution =
            get_int_or(kernel, "kernel", "space_grid_resolution", 64);
    }

    if (doc.contains("solver"))
        config.solver = parse_solver(doc.at("solver"), config.noise.p);

    if (doc.contains("mc")) {
        const json& mc = doc.at("mc");
        reject_unknown_keys(mc, "mc", {"q", "replicates", "master_seed"});
        config.mc.q = get_number_or(mc, "mc", "q", 1.0);
        config.mc.replicates = get_int_or(mc, "mc", "replicates", 1);
        config.mc.master_seed = get_seed_or(mc, "mc", "master_seed", 1);
    }

    if (doc.contains("output")) {
        const json& output = doc.at("output");
        reject_unknown_keys(output, "output", {"directory"});
        if (output.contains("directory"))
            config.output_directory = get_string(output, "output", "directory");
    }

    config.validate();
    return config;
}

RunConfig config_from_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

std::string config_to_json(const RunConfig& config)
{
    ojson doc;
    doc["noise"] = {{"p", config.noise.p},
                    {"c_p", config.noise.c_p},
                    {"eps", config.noise.eps},
                    {"K", config.noise.K},
                    {"seed", config.noise_seed}};
    doc["domain"] = {{"lower", config.domain.lower}, {"upper", config.domain.upper}};
    doc["kernel"] = {
        {"mode", config.kernel_mode == BoundaryMode::Free ? "free" : "dirichlet"},
        {"image_order", config.image_order},
        {"space_grid_resolution", config.space_grid_resolution}};
    if (config.solver) {
        const SolverConfig& s = *config.solver;
        ojson u0;
        switch (s.u0.kind) {
        case U0Spec::Kind::Constant:
            u0 = {{"type", "constant"}, {"value", s.u0.value}};
            break;
        case U0Spec::Kind::Indicator:
            u0 = {{"type", "indicator"},
                  {"lower", s.u0.support.lower},
                  {"upper", s.u0.support.upper}};
            break;
        case U0Spec::Kind::Sine:
            u0 = {{"type", "sine"}};
            break;
        }
        doc["solver"] = {{"mode", s.mode == ProductMode::Star ? "star" : "diamond"},
                         {"N_max", s.n_max},
                         {"t", s.t},
                         {"time_steps", s.time_steps},
                         {"points", s.points},
                         {"drift_enabled", s.drift_enabled},
                         {"u0", u0}};
    }
    doc["mc"] = {{"q", config.mc.q},
                 {"replicates", config.mc.replicates},
                 {"master_seed", config.mc.master_seed}};
    doc["output"] = {{"directory", config.output_directory}};
    return doc.dump(2) + "\n";
}

} // namespace stableheat
