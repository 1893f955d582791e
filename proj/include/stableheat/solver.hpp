#pragma once

#include <string>
#include <vector>

#include "stableheat/chaos.hpp"
#include "stableheat/domain.hpp"
#include "stableheat/kernel.hpp"
#include "stableheat/noise.hpp"

namespace stableheat {

/// Uniform grid 0 = s_0 < ... < s_steps = horizon for the trapezoid rule in
/// the layered time integrals.
struct TimeGrid {
    double horizon = 0.0;
    int steps = 0;

    double dt() const { return horizon / steps; }
    double node(int k) const { return horizon * k / steps; }
    void validate() const;
};

struct Grids {
    TimeGrid time;
    SpaceGrid space;
};

enum class ProductMode { Star, Diamond };

/// Expansion output at one space-time point. envelope_ratio[n] compares
/// |terms[n]| against the shape t^{n(1-beta)} n^{-n(1-beta)} with beta
/// taken at delta = 1e-3 (NaN when beta >= 1). tilt_factor is the
/// compensating exponential exp(-(c_p/p) K^{-p} t) in Diamond mode and 1
/// otherwise; it is reported, not applied. regime_note is empty inside the
/// mode's well-posed parameter region.
struct SeriesResult {
    std::vector<double> terms;
    std::vector<double> partial_sums;
    std::vector<double> envelope_ratio;
    double tilt_factor = 1.0;
    std::string regime_note;
};

/// Order-n term of the uncompensated expansion by the layered-convolution
/// sweep: tables W_m(s, i) over grid times and atoms, adjacent-distinct in
/// the atom chain, trapezoid in time. Endpoint kernel samples at zero time
/// difference contribute 0. Requires t == grids.time.horizon and x inside
/// the box, farther than 1e-12 from every atom.
double chaos_term_star(const NoiseField& field, const ScalarField& u0, int n, double t,
                       PointView x, const KernelSpec& spec, const Grids& grids);

/// Order-n term of the compensated expansion by exact enumeration of
/// pairwise-distinct site tuples (atoms plus optional drift pseudo-atoms),
/// each tuple integrated by a chained trapezoid pass. Shares the tuple
/// budget kTupleBudget with the chaos evaluators.
double chaos_term_diamond(const NoiseField& field, const ScalarField& u0, int n, double t,
                          PointView x, const KernelSpec& spec, const Grids& grids,
                          const DriftChannel& drift = {});

/// Terms 0..n_max and their partial sums at (t, x). Order 0 is the heat
/// semigroup applied to u0; higher orders follow the selected product. One
/// shared table sweep makes this bitwise equal to per-order calls.
SeriesResult solve_series(const NoiseField& field, const ScalarField& u0, int n_max, double t,
                          PointView x, ProductMode mode, const KernelSpec& spec,
                          const Grids& grids, const DriftChannel& drift = {});

/// Multiplies by exp(-(c_p/p) K^{-p} t), mapping a solution of the
/// truncated equation to its compensated version. tilt_inverse undoes it.
double tilt(double u_value, double t, const StableParams& params);
double tilt_inverse(double u_value, double t, const StableParams& params);

} // namespace stableheat
