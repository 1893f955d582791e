#pragma once

#include <functional>
#include <vector>

#include "stableheat/domain.hpp"

namespace stableheat {

using ScalarField = std::function<double(PointView)>;

enum class BoundaryMode { Free, Dirichlet };

/// Heat-kernel configuration on a box. In Dirichlet mode the kernel is the
/// method-of-images sum truncated at |m| <= image_order per axis; in Free
/// mode it is the whole-space Gaussian of the difference.
struct KernelSpec {
    BoxDomain domain;
    BoundaryMode mode = BoundaryMode::Dirichlet;
    int image_order = 8;

    void validate() const;

    /// Upper bound on the neglected image terms at time t, relative to the
    /// (4 pi t)^{-d/2} prefactor. Worst case over positions in the box.
    double image_tail_bound(double t) const;

    /// Certifies the truncation across (0, t_max]: the tail grows with t,
    /// so checking the largest time covers every smaller one. Throws
    /// ValidationError with a suggestion to raise image_order on failure.
    void check_image_tail(double t_max, double tol = 1e-14) const;
};

/// Tensor midpoint quadrature over the box: nodes are strictly interior,
/// weights are the uniform cell volume and sum to the box volume. Node
/// order is row-major with axis 0 slowest, pinned for deterministic sums.
struct SpaceGrid {
    std::vector<Point> nodes;
    std::vector<double> weights;

    static SpaceGrid midpoint(const BoxDomain& domain, int per_axis);
};

/// Whole-space Gaussian kernel (4 pi t)^{-d/2} exp(-|x|^2 / (4t)) evaluated
/// at a difference vector. Requires t > 0.
double free_kernel(double t, PointView x);

/// Heat kernel killed at the box boundary, by per-axis image sums. Requires
/// t > 0 and x, y inside the box. Symmetric in (x, y), zero on the
/// boundary, and clamped per axis into [0, free kernel of the difference]
/// so the whole-space domination holds exactly despite truncation roundoff.
double dirichlet_kernel(double t, PointView x, PointView y, const KernelSpec& spec);

/// Kernel value under the configured boundary mode: free_kernel of the
/// difference in Free mode, dirichlet_kernel otherwise.
double kernel_value(double t, PointView x, PointView y, const KernelSpec& spec);

/// Sine eigenfunction expansion of the Dirichlet kernel, truncated when the
/// neglected modes fall below 1e-18 relative. Slow reference for testing
/// the image representation; accurate for t bounded away from 0.
double dirichlet_kernel_spectral(double t, PointView x, PointView y, const BoxDomain& domain,
                                 int max_modes = 512);

/// Heat semigroup applied to initial data: integral of
/// kernel(t, x, y) u0(y) over the box, by the grid's midpoint rule.
/// Requires t > 0; callers handle t = 0 as the identity.
double heat_solve_initial(const ScalarField& u0, double t, PointView x, const KernelSpec& spec,
                          const SpaceGrid& grid);

} // namespace stableheat
