#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stableheat/chaos.hpp"
#include "stableheat/domain.hpp"
#include "stableheat/kernel.hpp"
#include "stableheat/noise.hpp"
#include "stableheat/solver.hpp"

namespace stableheat {

/// Version tag written into every manifest so output files can be matched
/// to the schema that produced them.
inline constexpr const char* kSpecVersion = "1.0";

/// Menu of initial conditions. A closed menu keeps every choice checkable:
/// constants are preserved by the free semigroup, the sine product is the
/// leading Dirichlet eigenfunction of the box, and the indicator has an
/// error-function oracle. All entries satisfy sup |u0| <= 1.
struct U0Spec {
    enum class Kind { Constant, Indicator, Sine };

    Kind kind = Kind::Constant;
    double value = 1.0;  ///< Constant only; requires |value| <= 1
    BoxDomain support;   ///< Indicator only; sub-box carrying the value 1

    void validate(const BoxDomain& domain) const;
    ScalarField make(const BoxDomain& domain) const;
};

/// Solver section of a run document. Separate struct because the `sample`
/// subcommand works from a document without one.
struct SolverConfig {
    ProductMode mode = ProductMode::Star;
    bool mode_given = false; ///< false: mode was defaulted from p
    int n_max = 0;
    double t = 0.0;
    int time_steps = 0;
    std::vector<Point> points;
    bool drift_enabled = false;
    bool drift_given = false;
    U0Spec u0;
};

struct McConfig {
    double q = 1.0;
    int replicates = 1;
    std::uint64_t master_seed = 1;
};

/// A full experiment document, parsed from JSON with strict key checking.
/// The CLI adds nothing beyond subcommand selection and output paths, so a
/// config file alone reproduces a run.
struct RunConfig {
    StableParams noise;
    std::uint64_t noise_seed = 1;
    BoxDomain domain;

    BoundaryMode kernel_mode = BoundaryMode::Dirichlet;
    int image_order = 8;
    int space_grid_resolution = 64;

    std::optional<SolverConfig> solver;
    McConfig mc;
    std::string output_directory = ".";

    /// Cross-field checks on top of pure parsing: point dimensions and
    /// membership, drift preconditions, u0 normalization, q in [1,2].
    void validate() const;

    KernelSpec kernel_spec() const;
    SpaceGrid space_grid() const;
    Grids grids() const;        ///< requires the solver section
    DriftChannel drift_channel() const;
    const SolverConfig& solver_required(const char* subcommand) const;
};

/// Parses and validates a document. Unknown keys at any level are
/// rejected by name. Defaults: c_p = 1, seed = 1, kernel mode dirichlet,
/// image_order 8, space_grid_resolution 64, solver mode star for p < 1 and
/// diamond otherwise, drift on exactly when p > 1, u0 = constant 1,
/// q = 1, replicates = 1, master_seed = 1, output directory ".".
RunConfig config_from_json(const std::string& text);
RunConfig config_from_file(const std::string& path);

/// Canonical echo: every field appears with its resolved value, in a fixed
/// key order, so two configs compare equal iff the runs they describe do.
std::string config_to_json(const RunConfig& config);

} // namespace stableheat
