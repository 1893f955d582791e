#pragma once

#include <functional>

#include "stableheat/domain.hpp"
#include "stableheat/kernel.hpp"
#include "stableheat/noise.hpp"

namespace stableheat {

/// Distinctness rule for tuple enumeration. AdjacentDistinct forbids equal
/// consecutive entries (the uncompensated product); PairwiseDistinct
/// forbids any repeat (the diagonal-free product, multilinear in masses).
enum class TupleConstraint { AdjacentDistinct, PairwiseDistinct };

/// Discretized continuous compensator. When enabled, pseudo-atoms sit at
/// the quadrature nodes with signed weights -density * w_q and join the
/// enumeration; distinctness rules never apply to them (the continuous
/// channel carries no diagonal mass).
struct DriftChannel {
    bool enabled = false;
    double density = 0.0;
    SpaceGrid grid;
};

/// Kernel on n points, given as views over the participating locations.
using NTupleFn = std::function<double(std::span<const PointView>)>;

/// Largest tolerated tuple count for exact enumeration.
inline constexpr double kTupleBudget = 1e8;

/// Multiple integral with the adjacent-distinct rule: sum over atom tuples
/// (i_1..i_n), i_j != i_{j+1}, of mass products times f. Atoms may repeat
/// non-adjacently, so for n >= 3 the result is generally not multilinear
/// in the masses. n = 0 degenerates to f() on an empty argument list;
/// throws BudgetError past kTupleBudget.
double eval_Jn(const NoiseField& field, const NTupleFn& f, int n);

/// Multiple integral with the pairwise-distinct rule, equal for symmetric f
/// to n! times the integral over the first-coordinate-ordered simplex.
/// Affine in every single atom mass. Pseudo-atoms from the drift channel
/// participate without distinctness restrictions. n = 0 degenerates to f();
/// requires pairwise-distinct atom first coordinates.
double eval_In(const NoiseField& field, const NTupleFn& f, int n,
               const DriftChannel& drift = {});

/// Slow reference route for eval_In without drift: n! times the sum of the
/// symmetrized kernel over tuples with strictly increasing first
/// coordinates. Agrees with eval_In for every f.
double eval_In_ordered(const NoiseField& field, const NTupleFn& f, int n);

/// Average of f over all argument permutations. Cost grows as n!, so keep
/// n small (<= 8).
NTupleFn symmetrize(NTupleFn f, int n);

} // namespace stableheat
