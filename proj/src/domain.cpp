#include "stableheat/domain.hpp"

#include <cmath>
#include <string>

#include "stableheat/errors.hpp"

namespace stableheat {

double BoxDomain::volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim(); ++a)
        v *= length(a);
    return v;
}

bool BoxDomain::contains(PointView x) const
{
    if (static_cast<int>(x.size()) != dim())
        return false;
    for (int a = 0; a < dim(); ++a)
        if (x[a] < lower[a] || x[a] > upper[a])
            return false;
    return true;
}

void BoxDomain::validate() const
{
    if (lower.size() != upper.size())
        throw ValidationError("BoxDomain: lower/upper size mismatch");
    const int d = dim();
    if (d < 1 || d > 3)
        throw ValidationError("BoxDomain: dimension must be 1, 2 or 3, got " + std::to_string(d));
    for (int a = 0; a < d; ++a) {
        if (!std::isfinite(lower[a]) || !std::isfinite(upper[a]))
            throw ValidationError("BoxDomain: bounds must be finite");
        if (!(lower[a] < upper[a]))
            throw ValidationError("BoxDomain: lower must be strictly below upper on axis " +
                                  std::to_string(a));
    }
}

} // namespace stableheat
