#include "stableheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw ValidationError("heat kernel: time must be positive and finite, got " + fmt17(t));
}

void require_point(PointView x, const BoxDomain& domain, const char* label)
{
    if (static_cast<int>(x.size()) != domain.dim())
        throw ValidationError(std::string("heat kernel: ") + label + " has wrong dimension");
    if (!domain.contains(x))
        throw ValidationError(std::string("heat kernel: ") + label + " lies outside the box");
}

/// One axis of the image sum, without the (4 pi t)^{-1/2} prefactor:
/// sum over |m| <= M of exp(-(dx+2mL)^2/4t) - exp(-(sx+2mL)^2/4t)
/// where dx = x - y and sx = x + y - 2*lower. Clamped into
/// [0, exp(-dx^2/4t)]: the infinite sum lies in that interval and the
/// truncation error is certified below the clamp scale.
double axis_image_sum(double t, double dx, double sx, double len, int order)
{
    const double inv4t = 1.0 / (4.0 * t);
    double acc = 0.0;
    for (int m = -order; m <= order; ++m) {
        const double shift = 2.0 * m * len;
        acc += std::exp(-(dx + shift) * (dx + shift) * inv4t);
        acc -= std::exp(-(sx + shift) * (sx + shift) * inv4t);
    }
    return std::clamp(acc, 0.0, std::exp(-dx * dx * inv4t));
}

} // namespace

void KernelSpec::validate() const
{
    domain.validate();
    if (mode == BoundaryMode::Dirichlet && image_order < 1)
        throw ValidationError("KernelSpec: image_order must be >= 1 in Dirichlet mode");
}

double KernelSpec::image_tail_bound(double t) const
{
    validate();
    require_time(t);
    if (mode == BoundaryMode::Free)
        return 0.0;
    // Neglected image with index |m| > order has argument at least
    // (2|m| - 2) * L in the worst position, covering both families and both
    // signs with a factor 4. Sum explicitly, then close with a geometric
    // bound; if the ratio will not certify convergence the bound is +inf.
    double total = 0.0;
    for (int a = 0; a < domain.dim(); ++a) {
        const double len = domain.length(a);
        const double inv4t = 1.0 / (4.0 * t);
        double axis = 0.0;
        double term = 0.0;
        double ratio = 1.0;
        for (int m = image_order + 1; m <= image_order + 256; ++m) {
            const double arg = (2.0 * m - 2.0) * len;
            term = 4.0 * std::exp(-arg * arg * inv4t);
            axis += term;
            ratio = std::exp(-(8.0 * m - 4.0) * len * len * inv4t);
        }
        if (term > 1e-300) {
            if (ratio >= 0.99)
                return std::numeric_limits<double>::infinity();
            axis += term * ratio / (1.0 - ratio);
        }
        total += axis;
    }
    return total;
}

void KernelSpec::check_image_tail(double t_max, double tol) const
{
    const double tail = image_tail_bound(t_max);
    if (!(tail < tol))
        throw ValidationError("KernelSpec: image series tail " + fmt17(tail) + " at t = " +
                              fmt17(t_max) + " exceeds " + fmt17(tol) +
                              "; raise image_order");
}

SpaceGrid SpaceGrid::midpoint(const BoxDomain& domain, int per_axis)
{
    domain.validate();
    if (per_axis < 1)
        throw ValidationError("SpaceGrid: per-axis resolution must be >= 1");
    const int d = domain.dim();
    std::size_t total = 1;
    for (int a = 0; a < d; ++a)
        total *= static_cast<std::size_t>(per_axis);

    double cell = domain.volume();
    for (int a = 0; a < d; ++a)
        cell /= per_axis;

    SpaceGrid grid;
    grid.nodes.reserve(total);
    grid.weights.assign(total, cell);
    std::vector<int> idx(d, 0);
    Point node(d);
    for (std::size_t q = 0; q < total; ++q) {
        for (int a = 0; a < d; ++a)
            node[a] = domain.lower[a] + (idx[a] + 0.5) * domain.length(a) / per_axis;
        grid.nodes.push_back(node);
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < per_axis)
                break;
            idx[a] = 0;
        }
    }
    return grid;
}

double free_kernel(double t, PointView x)
{
    require_time(t);
    if (x.empty())
        throw ValidationError("free_kernel: empty point");
    // Computed as a product of per-axis factors with the same expressions and
    // association order as dirichlet_kernel, whose axis factors are clamped by
    // exp(-dx^2/(4t)). Rounding is monotone, so this makes the pointwise
    // domination dirichlet <= free hold exactly in floating point, not just
    // up to roundoff.
    const int d = static_cast<int>(x.size());
    const double inv4t = 1.0 / (4.0 * t);
    double value = std::pow(4.0 * kPi * t, -0.5 * d);
    for (double c : x)
        value *= std::exp(-c * c * inv4t);
    return value;
}

double dirichlet_kernel(double t, PointView x, PointView y, const KernelSpec& spec)
{
    spec.validate();
    require_time(t);
    require_point(x, spec.domain, "x");
    require_point(y, spec.domain, "y");
    const int d = spec.domain.dim();
    double value = std::pow(4.0 * kPi * t, -0.5 * d);
    for (int a = 0; a < d; ++a) {
        // On the boundary the image pairs cancel exactly in real arithmetic
        // but only to roundoff in floating point, so pin the factor to 0.
        if (x[a] == spec.domain.lower[a] || x[a] == spec.domain.upper[a] ||
            y[a] == spec.domain.lower[a] || y[a] == spec.domain.upper[a])
            return 0.0;
        const double dx = x[a] - y[a];
        const double sx = x[a] + y[a] - 2.0 * spec.domain.lower[a];
        value *= axis_image_sum(t, dx, sx, spec.domain.length(a), spec.image_order);
    }
    return value;
}

double kernel_value(double t, PointView x, PointView y, const KernelSpec& spec)
{
    if (spec.mode == BoundaryMode::Free) {
        require_time(t);
        Point diff(x.size());
        for (std::size_t a = 0; a < x.size(); ++a)
            diff[a] = x[a] - y[a];
        return free_kernel(t, diff);
    }
    return dirichlet_kernel(t, x, y, spec);
}

double dirichlet_kernel_spectral(double t, PointView x, PointView y, const BoxDomain& domain,
                                 int max_modes)
{
    domain.validate();
    require_time(t);
    require_point(x, domain, "x");
    require_point(y, domain, "y");
    double value = 1.0;
    for (int a = 0; a < domain.dim(); ++a) {
        const double len = domain.length(a);
        const double xa = (x[a] - domain.lower[a]) / len;
        const double ya = (y[a] - domain.lower[a]) / len;
        double axis = 0.0;
        for (int k = 1; k <= max_modes; ++k) {
            const double decay = std::exp(-k * k * kPi * kPi * t / (len * len));
            axis += 2.0 / len * std::sin(k * kPi * xa) * std::sin(k * kPi * ya) * decay;
            if (decay < 1e-18 && k > 4)
                break;
        }
        value *= axis;
    }
    return value;
}

double heat_solve_initial(const ScalarField& u0, double t, PointView x, const KernelSpec& spec,
                          const SpaceGrid& grid)
{
    require_time(t);
    if (grid.nodes.empty() || grid.nodes.size() != grid.weights.size())
        throw ValidationError("heat_solve_initial: malformed space grid");
    double acc = 0.0;
    for (std::size_t q = 0; q < grid.nodes.size(); ++q)
        acc += grid.weights[q] * kernel_value(t, x, grid.nodes[q], spec) * u0(grid.nodes[q]);
    return acc;
}

} // namespace stableheat
