#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stableheat/domain.hpp"
#include "stableheat/noise.hpp"

namespace stableheat {

/// Well-posedness report for the expansion at stability index p in spatial
/// dimension d. star_regime_ok covers the uncompensated product (p < 1,
/// with the extra high-dimension restriction); diamond_regime_ok covers the
/// compensated product (1 <= p < 1 + 2/d). q_max is the supremum of moment
/// exponents with a summable envelope.
struct RegimeReport {
    double p = 0.0;
    int d = 1;
    bool star_regime_ok = false;
    bool diamond_regime_ok = false;
    double q_max = 0.0;

    /// Kernel-singularity exponent d/2 - d/(4(p + delta)).
    double beta(double delta) const;

    /// Envelope exponent 1 - (d/2)(q - 1); positive iff q < q_max.
    double alpha(double q) const;
};

RegimeReport regime(double p, int d);

/// Closed form of the ordered-simplex integral of the product of n power
/// kernels (s_{k+1}-s_k)^{-beta} with the top variable anchored at t:
/// t^{n(1-beta)} Gamma(1-beta)^n / Gamma(1+n(1-beta)).
/// Requires n >= 0, beta in [0,1), t > 0.
double simplex_power_closed(int n, double beta, double t);

/// Same integral evaluated by the one-step recurrence
/// H_{m+1}(t) = integral_0^t (t-s)^{-beta} H_m(s) ds, reduced per level to
/// a [0,1] Beta-type integral by the scaling property and computed with
/// tanh-sinh quadrature (quad_order nodes per side, >= 16). No Gamma
/// identity enters this path; it is the independent route against which
/// the closed form is checked.
double simplex_power_recursive(int n, double beta, double t, int quad_order = 256);

/// Beta function two ways: direct quadrature of x^{b-1}(1-x)^{a-1} and the
/// Gamma quotient. Requires a, b > 0.
struct BetaPair {
    double quadrature = 0.0;
    double gamma_form = 0.0;
};
BetaPair beta_identity(double a, double b);

/// Poisson upper tail and its two closed bounds:
/// exact = P(X >= n0), bound1 = lambda^{n0}/n0!,
/// bound2 = lambda^{n0} e^{n0} / n0^{n0} (with 0^0 = 1).
/// exact <= bound1 <= bound2 for every lambda > 0, n0 >= 0.
struct PoissonTail {
    double exact = 0.0;
    double bound1 = 0.0;
    double bound2 = 0.0;
};
PoissonTail poisson_tail_bound(double lambda, int n0);

/// Gamma(x+1) alongside its Stirling-type lower bound x^x e^{-x}, x in
/// (0, 170] to stay inside double range.
struct GammaLowerPair {
    double gamma_val = 0.0;
    double lower_val = 0.0;
};
GammaLowerPair gamma_lower(double x);

/// Expected count of type-n atoms in a region of the given volume:
/// volume * c_p (2^p - 1)/p * 2^{n p}. Exact for bands fully inside the
/// sampling window (eps, K].
double band_intensity(double volume, int n, const StableParams& params);

/// Critical clustering radius for a type-n center, type-m satellites and
/// dyadic count level M = 2^k:
/// e^{-1/d} delta^{4/(M d)} 2^{-p n/(d M)} 2^{-p m/d} M^{1/d}
///   2^{-delta(n+m+k)/(d M)}.
/// Satisfies a^{dM} = delta^4 (2^{np + mMp} e^M / M^M)^{-1} 2^{-delta(n+m+k)}.
double cluster_radius(int n, int m, int k, double delta, double p, int d);

/// True when some atom with type in n_range has, for some k in k_range
/// (k >= 0), at least 2^k other atoms of some type m in m_range within
/// cluster_radius(type, m, k, delta). The center atom never counts as its
/// own satellite.
bool detect_cluster_event(const NoiseField& field, double delta, IntRange n_range,
                          IntRange m_range, IntRange k_range);

/// Term-wise moment envelope rho^n / Gamma(1 + n alpha), alpha in (0,1].
double moment_envelope(int n, double alpha, double rho);

/// Closed form of the spatial q-th power integral of the Gaussian kernel:
/// q^{-d/2} (4 pi r)^{-(q-1) d/2}. Requires r > 0, q >= 1, d >= 1.
double gaussian_q_integral(double r, double q, int d);

/// Independent radial quadrature of the same integral (surface measure
/// times composite Gauss-Legendre in the radius). Verification route only.
double gaussian_q_integral_quadrature(double r, double q, int d);

/// One emitted verification row. `arguments` is a semicolon-separated
/// key=value list (comma-free so rows stay single CSV cells).
struct CheckRow {
    std::string check_name;
    std::string arguments;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Names accepted by run_checks, in execution order.
std::vector<std::string> check_names();

/// Runs the named numerical checks (all of them when filter is empty) and
/// returns one row per compared quantity. tolerance_override replaces every
/// check's default tolerance when set; 0 makes float-level agreement checks
/// report their irreducible roundoff as failures. Unknown names throw
/// ValidationError.
std::vector<CheckRow> run_checks(const std::string& filter = {},
                                 std::optional<double> tolerance_override = {});

namespace detail {

/// tanh-sinh rule on (0,1); the integrand receives x and 1-x separately so
/// endpoint singularities keep full precision. Handles integrable algebraic
/// endpoint singularities with exponents above -1.
double tanh_sinh_01(const std::function<double(double, double)>& f, int n_side = 256);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace detail

} // namespace stableheat
