#pragma once

#include <span>
#include <vector>

namespace stableheat {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Axis-aligned box in R^d, d in {1,2,3}. The spatial domain for noise
/// sampling, kernel evaluation and quadrature.
struct BoxDomain {
    std::vector<double> lower;
    std::vector<double> upper;

    int dim() const { return static_cast<int>(lower.size()); }
    double length(int axis) const { return upper[axis] - lower[axis]; }
    double volume() const;
    bool contains(PointView x) const;

    /// Throws ValidationError unless 1 <= d <= 3, sizes match and every
    /// axis has finite lower < upper.
    void validate() const;
};

/// Closed integer interval, used for particle-type and dyadic-level ranges.
struct IntRange {
    int lo = 0;
    int hi = 0;
    bool contains(int v) const { return v >= lo && v <= hi; }
};

} // namespace stableheat
