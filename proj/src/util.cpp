#include "stableheat/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "stableheat/errors.hpp"

namespace stableheat {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t mix64(std::uint64_t x)
{
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t r)
{
    constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
    return mix64(master + (r + 1) * kGoldenGamma);
}

double uniform_halfopen(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_closed_above(std::mt19937_64& rng)
{
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t poisson_count(std::mt19937_64& rng, double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw ValidationError("poisson_count: mean must be finite and nonnegative");
    std::uint64_t count = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = std::min(remaining, 30.0);
        const double limit = std::exp(-chunk);
        double prod = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            prod *= uniform_closed_above(rng);
        } while (prod > limit);
        count += k - 1;
        remaining -= chunk;
    }
    return count;
}

} // namespace stableheat
