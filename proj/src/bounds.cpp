#include "stableheat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

constexpr double kPi = std::numbers::pi;

std::string arg1(const char* k, double v) { return std::string(k) + "=" + fmt17(v); }

} // namespace

namespace detail {

double tanh_sinh_01(const std::function<double(double, double)>& f, int n_side)
{
    if (n_side < 16)
        throw ValidationError("tanh_sinh_01: need at least 16 nodes per side");
    const double t_max = 6.0;
    const double h = t_max / n_side;
    double acc = 0.0;
    for (int j = -n_side; j <= n_side; ++j) {
        const double u = 0.5 * kPi * std::sinh(j * h);
        const double x = 1.0 / (1.0 + std::exp(-2.0 * u));
        const double omx = 1.0 / (1.0 + std::exp(2.0 * u));
        if (x < 1e-280 || omx < 1e-280)
            continue;
        const double w = h * kPi * std::cosh(j * h) * x * omx;
        acc += w * f(x, omx);
    }
    return acc;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

} // namespace detail

double RegimeReport::beta(double delta) const
{
    if (!(delta > 0.0))
        throw ValidationError("RegimeReport::beta: delta must be positive");
    return 0.5 * d - d / (4.0 * (p + delta));
}

double RegimeReport::alpha(double q) const
{
    return 1.0 - 0.5 * d * (q - 1.0);
}

RegimeReport regime(double p, int d)
{
    if (!(p > 0.0) || !(p < 2.0))
        throw ValidationError("regime: p must lie in (0,2)");
    if (d < 1)
        throw ValidationError("regime: d must be >= 1");
    RegimeReport r;
    r.p = p;
    r.d = d;
    r.q_max = 1.0 + 2.0 / d;
    r.star_regime_ok = p < 1.0 && (d <= 4 || p < 0.5 + 1.0 / (d - 2));
    r.diamond_regime_ok = p >= 1.0 && p < r.q_max;
    return r;
}

namespace {

void check_simplex_args(int n, double beta, double t)
{
    if (n < 0)
        throw ValidationError("simplex power integral: order must be >= 0");
    if (!(beta >= 0.0) || !(beta < 1.0))
        throw ValidationError("simplex power integral: beta must lie in [0,1)");
    if (!(t > 0.0) || !std::isfinite(t))
        throw ValidationError("simplex power integral: t must be positive");
}

} // namespace

double simplex_power_closed(int n, double beta, double t)
{
    check_simplex_args(n, beta, t);
    if (n == 0)
        return 1.0;
    const double g = 1.0 - beta;
    return std::exp(n * g * std::log(t) + n * std::lgamma(g) - std::lgamma(1.0 + n * g));
}

double simplex_power_recursive(int n, double beta, double t, int quad_order)
{
    check_simplex_args(n, beta, t);
    if (n == 0)
        return 1.0;
    const double g = 1.0 - beta;
    // Scaling collapses each level to H_{m+1}(1) = H_m(1) * B_m with
    // B_m = integral_0^1 (1-x)^{-beta} x^{m(1-beta)} dx, evaluated
    // numerically; the closed Gamma form is never consulted here.
    double level_value = 1.0;
    for (int m = 0; m < n; ++m) {
        const double mass_exp = m * g;
        const double bm = detail::tanh_sinh_01(
            [beta, mass_exp](double x, double omx) {
                return std::pow(omx, -beta) * std::pow(x, mass_exp);
            },
            quad_order);
        level_value *= bm;
    }
    return level_value * std::pow(t, n * g);
}

BetaPair beta_identity(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw ValidationError("beta_identity: a and b must be positive");
    BetaPair out;
    out.quadrature = detail::tanh_sinh_01(
        [a, b](double x, double omx) { return std::pow(x, b - 1.0) * std::pow(omx, a - 1.0); });
    out.gamma_form = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    return out;
}

PoissonTail poisson_tail_bound(double lambda, int n0)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ValidationError("poisson_tail_bound: lambda must be positive");
    if (n0 < 0)
        throw ValidationError("poisson_tail_bound: n0 must be >= 0");
    PoissonTail out;
    // Upper tail summed directly from the n0 term so tiny tails never pass
    // through a 1 - CDF cancellation.
    double term = std::exp(n0 * std::log(lambda) - lambda - std::lgamma(n0 + 1.0));
    double sum = 0.0;
    for (int j = n0; j < n0 + 600; ++j) {
        sum += term;
        term *= lambda / (j + 1.0);
        if (term < sum * 1e-18 && j > lambda)
            break;
    }
    // The series for P(N >= 0) sums to 1 in real arithmetic but can land a
    // few ulps above it; a probability is capped at 1.
    out.exact = std::min(sum, 1.0);
    out.bound1 = std::exp(n0 * std::log(lambda) - std::lgamma(n0 + 1.0));
    out.bound2 = n0 == 0 ? 1.0 : std::exp(n0 * std::log(lambda) + n0 - n0 * std::log(n0));
    return out;
}

GammaLowerPair gamma_lower(double x)
{
    if (!(x > 0.0) || !(x <= 170.0))
        throw ValidationError("gamma_lower: x must lie in (0, 170]");
    GammaLowerPair out;
    out.gamma_val = std::tgamma(x + 1.0);
    out.lower_val = std::exp(x * std::log(x) - x);
    return out;
}

double band_intensity(double volume, int n, const StableParams& params)
{
    params.validate();
    if (!(volume >= 0.0) || !std::isfinite(volume))
        throw ValidationError("band_intensity: volume must be nonnegative");
    const double cp_band = params.c_p * (std::pow(2.0, params.p) - 1.0) / params.p;
    return volume * cp_band * std::pow(2.0, n * params.p);
}

double cluster_radius(int n, int m, int k, double delta, double p, int d)
{
    if (k < 0)
        throw ValidationError("cluster_radius: k must be >= 0");
    if (!(delta > 0.0) || !(delta <= 1.0))
        throw ValidationError("cluster_radius: delta must lie in (0,1]");
    if (!(p > 0.0) || !(p < 2.0))
        throw ValidationError("cluster_radius: p must lie in (0,2)");
    if (d < 1)
        throw ValidationError("cluster_radius: d must be >= 1");
    const double M = std::ldexp(1.0, k);
    const double dd = d;
    return std::exp(-1.0 / dd) * std::pow(delta, 4.0 / (M * dd)) *
           std::pow(2.0, -p * n / (dd * M)) * std::pow(2.0, -p * m / dd) *
           std::pow(M, 1.0 / dd) * std::pow(2.0, -delta * (n + m + k) / (dd * M));
}

bool detect_cluster_event(const NoiseField& field, double delta, IntRange n_range,
                          IntRange m_range, IntRange k_range)
{
    if (k_range.lo < 0)
        throw ValidationError("detect_cluster_event: k_range must be nonnegative");
    const double p = field.params.p;
    const int d = field.domain.dim();
    const auto& atoms = field.atoms;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const int n = atoms[i].type_index;
        if (!n_range.contains(n))
            continue;
        for (int k = k_range.lo; k <= k_range.hi; ++k) {
            const std::size_t needed = static_cast<std::size_t>(1) << k;
            for (int m = m_range.lo; m <= m_range.hi; ++m) {
                const double radius = cluster_radius(n, m, k, delta, p, d);
                const double r2 = radius * radius;
                std::size_t count = 0;
                for (std::size_t j = 0; j < atoms.size(); ++j) {
                    if (j == i || atoms[j].type_index != m)
                        continue;
                    double dist2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        const double diff = atoms[i].location[a] - atoms[j].location[a];
                        dist2 += diff * diff;
                    }
                    if (dist2 <= r2 && ++count >= needed)
                        break;
                }
                if (count >= needed)
                    return true;
            }
        }
    }
    return false;
}

double moment_envelope(int n, double alpha, double rho)
{
    if (n < 0)
        throw ValidationError("moment_envelope: n must be >= 0");
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw ValidationError("moment_envelope: alpha must lie in (0,1]");
    if (!(rho > 0.0))
        throw ValidationError("moment_envelope: rho must be positive");
    return std::exp(n * std::log(rho) - std::lgamma(1.0 + n * alpha));
}

double gaussian_q_integral(double r, double q, int d)
{
    if (!(r > 0.0) || !(q >= 1.0) || d < 1)
        throw ValidationError("gaussian_q_integral: need r > 0, q >= 1, d >= 1");
    return std::pow(q, -0.5 * d) * std::pow(4.0 * kPi * r, -0.5 * d * (q - 1.0));
}

double gaussian_q_integral_quadrature(double r, double q, int d)
{
    if (!(r > 0.0) || !(q >= 1.0) || d < 1)
        throw ValidationError("gaussian_q_integral_quadrature: need r > 0, q >= 1, d >= 1");
    const double surface = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
    const double cut = 14.0 * std::sqrt(4.0 * r / q);
    const double prefactor = std::pow(4.0 * kPi * r, -0.5 * d * q);
    std::vector<double> nodes, weights;
    detail::gauss_legendre(32, nodes, weights);
    const int panels = 8;
    double acc = 0.0;
    for (int s = 0; s < panels; ++s) {
        const double lo = cut * s / panels;
        const double hi = cut * (s + 1) / panels;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double rho = mid + half * nodes[i];
            acc += half * weights[i] * std::pow(rho, d - 1.0) *
                   std::exp(-q * rho * rho / (4.0 * r));
        }
    }
    return surface * prefactor * acc;
}

// ---------------------------------------------------------------------------
// named check registry
// ---------------------------------------------------------------------------

namespace {

using Rows = std::vector<CheckRow>;

double tol_or(std::optional<double> ov, double def) { return ov.value_or(def); }

void push_le(Rows& rows, std::string name, std::string args, double lhs, double rhs, double tol)
{
    rows.push_back({std::move(name), std::move(args), lhs, rhs,
                    lhs <= rhs * (1.0 + tol) + tol * 1e-300});
}

void push_close(Rows& rows, std::string name, std::string args, double lhs, double rhs,
                double tol)
{
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    rows.push_back({std::move(name), std::move(args), lhs, rhs,
                    std::abs(lhs - rhs) <= tol * scale});
}

void check_poisson_tail(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    for (int li = 1; li <= 100; ++li) {
        const double lambda = 0.1 * li;
        for (int n0 = 0; n0 <= 20; ++n0) {
            const auto pt = poisson_tail_bound(lambda, n0);
            const std::string base = arg1("lambda", lambda) + ";n0=" + std::to_string(n0);
            push_le(rows, "poisson_tail", base + ";side=exact_vs_factorial", pt.exact,
                    pt.bound1, tol);
            push_le(rows, "poisson_tail", base + ";side=factorial_vs_stirling", pt.bound1,
                    pt.bound2, tol);
        }
    }
}

void check_simplex_power(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-6);
    for (double beta : {0.1, 0.25, 0.5, 0.75})
        for (int n = 1; n <= 8; ++n)
            for (double t : {0.5, 1.0, 2.0})
                push_close(rows, "simplex_power",
                           arg1("beta", beta) + ";n=" + std::to_string(n) + ";" + arg1("t", t),
                           simplex_power_recursive(n, beta, t), simplex_power_closed(n, beta, t),
                           tol);
}

void check_gamma_lower(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    for (int i = 1; i <= 5000; ++i) {
        const double x = 0.01 * i;
        const auto pair = gamma_lower(x);
        push_le(rows, "gamma_lower_bound", arg1("x", x), pair.lower_val, pair.gamma_val, tol);
    }
}

void check_gaussian_q(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-8);
    for (int d : {1, 2, 3})
        for (double q : {1.5, 2.0})
            for (double r : {0.1, 0.5, 1.0, 2.0, 10.0})
                push_close(rows, "gaussian_q_integral",
                           "d=" + std::to_string(d) + ";" + arg1("q", q) + ";" + arg1("r", r),
                           gaussian_q_integral(r, q, d), gaussian_q_integral_quadrature(r, q, d),
                           tol);
}

void check_cluster_radius_identity(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    for (int d : {1, 2})
        for (double p : {0.5, 1.5})
            for (double delta : {0.05, 0.2, 0.5})
                for (int n : {-2, 0, 3, 6})
                    for (int m : {-2, 0, 3, 6})
                        for (int k = 0; k <= 4; ++k) {
                            const double M = std::ldexp(1.0, k);
                            const double a = cluster_radius(n, m, k, delta, p, d);
                            const double lhs = std::pow(a, d * M);
                            const double rhs_log =
                                4.0 * std::log(delta) -
                                (n * p + m * M * p) * std::numbers::ln2 - M +
                                M * std::log(M) - delta * (n + m + k) * std::numbers::ln2;
                            push_close(rows, "cluster_radius_identity",
                                       "n=" + std::to_string(n) + ";m=" + std::to_string(m) +
                                           ";k=" + std::to_string(k) + ";" +
                                           arg1("delta", delta) + ";" + arg1("p", p) +
                                           ";d=" + std::to_string(d),
                                       lhs, std::exp(rhs_log), tol);
                        }
}

void check_symmetrization(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    std::mt19937_64 rng(0x5eedULL);
    const int g = 16;
    for (int rep = 0; rep < 8; ++rep)
        for (double q : {1.2, 2.0}) {
            std::vector<double> f(g * g);
            for (auto& v : f)
                v = 2.0 * uniform_halfopen(rng) - 1.0;
            double norm_f = 0.0, norm_sym = 0.0;
            const double w = 1.0 / (g * g);
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j) {
                    norm_f += w * std::pow(std::abs(f[i * g + j]), q);
                    norm_sym += w * std::pow(std::abs(0.5 * (f[i * g + j] + f[j * g + i])), q);
                }
            push_le(rows, "symmetrization_contraction",
                    "rep=" + std::to_string(rep) + ";" + arg1("q", q), norm_sym, norm_f, tol);
        }
}

void check_power_sum(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    std::mt19937_64 rng(0xabcdULL);
    for (int rep = 0; rep < 10; ++rep)
        for (double q : {1.5, 2.0}) {
            const int len = 3 + static_cast<int>(rng() % 48);
            double total = 0.0, bound = 0.0;
            for (int n = 0; n < len; ++n) {
                const double a = uniform_halfopen(rng) * 3.0;
                total += a;
                bound += std::pow(2.0, (q - 1.0) * (n + 1)) * std::pow(a, q);
            }
            push_le(rows, "power_sum_inequality",
                    "rep=" + std::to_string(rep) + ";" + arg1("q", q) +
                        ";len=" + std::to_string(len),
                    std::pow(total, q), bound, tol);
        }
}

void check_beta_identity(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-8);
    for (double a : {0.1, 0.5, 1.0, 2.5})
        for (double b : {0.1, 0.5, 1.0, 2.5}) {
            const auto pair = beta_identity(a, b);
            push_close(rows, "beta_identity", arg1("a", a) + ";" + arg1("b", b),
                       pair.quadrature, pair.gamma_form, tol);
        }
}

void check_band_telescoping(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-12);
    for (double p : {0.5, 1.5}) {
        StableParams params;
        params.p = p;
        params.eps = std::ldexp(1.0, -5);
        params.K = 4.0;
        BoxDomain box{{0.0}, {1.0}};
        double sum = 0.0;
        for (int n = -2; n <= 4; ++n)
            sum += band_intensity(1.0, n, params);
        push_close(rows, "band_telescoping", arg1("p", p) + ";eps=2^-5;K=4", sum,
                   total_intensity(params, box), tol);
    }
}

void check_envelope_series(Rows& rows, std::optional<double> ov)
{
    const double tol = tol_or(ov, 1e-9);
    const double q = 2.0;
    const double c = std::pow(2.0, q - 1.0);
    for (double rho : {0.5, 2.0})
        for (double alpha : {0.5, 1.0}) {
            double s100 = 0.0, s200 = 0.0;
            for (int n = 0; n <= 200; ++n) {
                const double term = std::pow(c, n + 1.0) * moment_envelope(n, alpha, rho);
                if (n <= 100)
                    s100 += term;
                s200 += term;
            }
            push_close(rows, "moment_envelope_series", arg1("rho", rho) + ";" +
                           arg1("alpha", alpha) + ";q=2",
                       s200, s100, tol);
        }
}

} // namespace

std::vector<std::string> check_names()
{
    return {"poisson_tail",      "simplex_power",           "gamma_lower_bound",
            "gaussian_q_integral", "cluster_radius_identity", "symmetrization_contraction",
            "power_sum_inequality", "beta_identity",          "band_telescoping",
            "moment_envelope_series"};
}

std::vector<CheckRow> run_checks(const std::string& filter, std::optional<double> tol)
{
    const auto names = check_names();
    if (!filter.empty() &&
        std::find(names.begin(), names.end(), filter) == names.end()) {
        std::string msg = "run_checks: unknown check '" + filter + "'; valid names:";
        for (const auto& n : names)
            msg += " " + n;
        throw ValidationError(msg);
    }
    Rows rows;
    auto want = [&](const char* name) { return filter.empty() || filter == name; };
    if (want("poisson_tail"))
        check_poisson_tail(rows, tol);
    if (want("simplex_power"))
        check_simplex_power(rows, tol);
    if (want("gamma_lower_bound"))
        check_gamma_lower(rows, tol);
    if (want("gaussian_q_integral"))
        check_gaussian_q(rows, tol);
    if (want("cluster_radius_identity"))
        check_cluster_radius_identity(rows, tol);
    if (want("symmetrization_contraction"))
        check_symmetrization(rows, tol);
    if (want("power_sum_inequality"))
        check_power_sum(rows, tol);
    if (want("beta_identity"))
        check_beta_identity(rows, tol);
    if (want("band_telescoping"))
        check_band_telescoping(rows, tol);
    if (want("moment_envelope_series"))
        check_envelope_series(rows, tol);
    return rows;
}

} // namespace stableheat
