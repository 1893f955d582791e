#include "stableheat/solver.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "stableheat/bounds.hpp"
#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

void TimeGrid::validate() const
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw ValidationError("TimeGrid: horizon must be positive");
    if (steps < 1)
        throw ValidationError("TimeGrid: steps must be >= 1");
}

namespace {

void check_drift(const NoiseField& field, const DriftChannel& drift)
{
    if (drift.enabled && field.params.p <= 1.0)
        throw ValidationError("solver: the drift channel requires p > 1 "
                              "(no compensator exists below the martingale regime)");
}

void check_tuple_budget(std::size_t site_count, int n)
{
    const double estimate = std::pow(static_cast<double>(site_count), n);
    if (estimate > kTupleBudget)
        throw BudgetError("chaos_term_diamond: about " + fmt17(estimate) +
                          " tuples exceed the budget of " + fmt17(kTupleBudget) + " (order " +
                          std::to_string(n) + ", " + std::to_string(site_count) + " sites)");
}

void check_common(const NoiseField& field, double t, PointView x, const KernelSpec& spec,
                  const Grids& grids)
{
    field.params.validate();
    spec.validate();
    grids.time.validate();
    if (t != grids.time.horizon)
        throw ValidationError("solver: t must equal the time grid horizon");
    if (static_cast<int>(x.size()) != spec.domain.dim())
        throw ValidationError("solver: evaluation point has wrong dimension");
    if (!spec.domain.contains(x))
        throw ValidationError("solver: evaluation point lies outside the box");
    for (const auto& atom : field.atoms) {
        double dist2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
            const double diff = x[a] - atom.location[a];
            dist2 += diff * diff;
        }
        if (dist2 < 1e-24)
            throw ValidationError("solver: evaluation point coincides with an atom "
                                  "(needs distance > 1e-12)");
    }
    if (spec.mode == BoundaryMode::Dirichlet)
        spec.check_image_tail(grids.time.horizon);
}

/// Sites taking part in the chained convolutions: atoms first, then drift
/// pseudo-atoms with their signed weights.
struct SiteSet {
    std::vector<PointView> locations;
    std::vector<double> weights;
    std::size_t atom_count = 0;
};

SiteSet gather_sites(const NoiseField& field, const DriftChannel* drift)
{
    SiteSet s;
    for (const auto& atom : field.atoms) {
        s.locations.emplace_back(atom.location);
        s.weights.push_back(atom.mass);
    }
    s.atom_count = s.locations.size();
    if (drift != nullptr && drift->enabled)
        for (std::size_t q = 0; q < drift->grid.nodes.size(); ++q) {
            s.locations.emplace_back(drift->grid.nodes[q]);
            s.weights.push_back(-drift->density * drift->grid.weights[q]);
        }
    return s;
}

/// Shared kernel and initial-value tables on the time grid. All kernel
/// samples with zero time difference are pinned to 0 (the products remove
/// diagonals, so those samples carry no mass in the limit).
class Tables {
public:
    Tables(const SiteSet& sites, const ScalarField& u0, PointView x, const KernelSpec& spec,
           const Grids& grids)
        : steps_(grids.time.steps), count_(sites.locations.size())
    {
        const double h = grids.time.dt();
        g_site_.assign(static_cast<std::size_t>(steps_ + 1) * count_ * count_, 0.0);
        g_ext_.assign(static_cast<std::size_t>(steps_ + 1) * count_, 0.0);
        v_.assign(static_cast<std::size_t>(steps_ + 1) * count_, 0.0);
        for (int dk = 1; dk <= steps_; ++dk)
            for (std::size_t i = 0; i < count_; ++i) {
                g_ext(dk, i) = kernel_value(dk * h, x, sites.locations[i], spec);
                for (std::size_t j = 0; j <= i; ++j) {
                    const double g =
                        kernel_value(dk * h, sites.locations[i], sites.locations[j], spec);
                    g_site(dk, i, j) = g;
                    g_site(dk, j, i) = g;
                }
            }
        for (std::size_t i = 0; i < count_; ++i) {
            v(0, i) = u0(sites.locations[i]);
            for (int k = 1; k <= steps_; ++k)
                v(k, i) = heat_solve_initial(u0, k * h, sites.locations[i], spec, grids.space);
        }
    }

    double& g_site(int dk, std::size_t i, std::size_t j)
    {
        return g_site_[(static_cast<std::size_t>(dk) * count_ + i) * count_ + j];
    }
    double& g_ext(int dk, std::size_t i)
    {
        return g_ext_[static_cast<std::size_t>(dk) * count_ + i];
    }
    double& v(int k, std::size_t i) { return v_[static_cast<std::size_t>(k) * count_ + i]; }

    int steps() const { return steps_; }
    std::size_t count() const { return count_; }

private:
    int steps_;
    std::size_t count_;
    std::vector<double> g_site_;
    std::vector<double> g_ext_;
    std::vector<double> v_;
};

double trapezoid_weight(int l, int k)
{
    return (l == 0 || l == k) ? 0.5 : 1.0;
}

/// Sweep for the adjacent-distinct product: W_0(s,i) = v(s,i),
/// W_m(s_k, i) = sum_{j != i} w_j int_0^{s_k} G(s_k - s, i, j) W_{m-1}(s, j) ds,
/// term n = sum_i w_i int_0^t G(t - s, x, i) W_{n-1}(s, i) ds.
class StarSweep {
public:
    StarSweep(const SiteSet& sites, Tables& tables, const Grids& grids)
        : sites_(sites), tables_(tables), h_(grids.time.dt())
    {
        const std::size_t slots = static_cast<std::size_t>(tables.steps() + 1) * sites.locations.size();
        w_.assign(slots, 0.0);
        for (int k = 0; k <= tables_.steps(); ++k)
            for (std::size_t i = 0; i < sites_.locations.size(); ++i)
                at(w_, k, i) = tables_.v(k, i);
        level_ = 0;
    }

    /// Advances the table from level m-1 to level m.
    void advance()
    {
        const int S = tables_.steps();
        const std::size_t ns = sites_.locations.size();
        std::vector<double> next(w_.size(), 0.0);
        for (int k = 1; k <= S; ++k)
            for (std::size_t i = 0; i < ns; ++i) {
                double acc = 0.0;
                for (int l = 0; l <= k; ++l) {
                    if (l == k)
                        continue; // kernel sample at zero time difference
                    double inner = 0.0;
                    for (std::size_t j = 0; j < ns; ++j) {
                        if (j == i)
                            continue;
                        inner += sites_.weights[j] * tables_.g_site(k - l, i, j) * at(w_, l, j);
                    }
                    acc += trapezoid_weight(l, k) * inner;
                }
                at(next, k, i) = h_ * acc;
            }
        w_.swap(next);
        ++level_;
    }

    /// Final reduction against the external point for order level+1.
    double reduce() const
    {
        const int S = tables_.steps();
        double acc = 0.0;
        for (int l = 0; l < S; ++l) {
            double inner = 0.0;
            for (std::size_t i = 0; i < sites_.locations.size(); ++i)
                inner += sites_.weights[i] * tables_.g_ext(S - l, i) * at(w_, l, i);
            acc += trapezoid_weight(l, S) * inner;
        }
        return h_ * acc;
    }

    int level() const { return level_; }

private:
    double& at(std::vector<double>& buf, int k, std::size_t i) const
    {
        return buf[static_cast<std::size_t>(k) * sites_.locations.size() + i];
    }
    double at(const std::vector<double>& buf, int k, std::size_t i) const
    {
        return buf[static_cast<std::size_t>(k) * sites_.locations.size() + i];
    }

    const SiteSet& sites_;
    Tables& tables_;
    double h_;
    std::vector<double> w_;
    int level_;
};

/// Depth-first exact enumeration for the pairwise-distinct product. Prefix
/// chains share their partial time convolutions; atoms never repeat inside
/// a tuple, pseudo-atoms may.
class DiamondSweep {
public:
    DiamondSweep(const SiteSet& sites, Tables& tables, const Grids& grids)
        : sites_(sites), tables_(tables), h_(grids.time.dt()),
          used_(sites.atom_count, false)
    {
    }

    double term(int n)
    {
        check_tuple_budget(sites_.locations.size(), n);
        n_ = n;
        total_ = 0.0;
        std::vector<double> base(tables_.steps() + 1);
        for (std::size_t s = 0; s < sites_.locations.size(); ++s) {
            for (int k = 0; k <= tables_.steps(); ++k)
                base[k] = tables_.v(k, s);
            extend(1, s, base);
        }
        return total_;
    }

private:
    /// chain holds T_pos(s_k) for the prefix ending at site `last`.
    void extend(int pos, std::size_t last, const std::vector<double>& chain)
    {
        if (pos == n_) {
            const int S = tables_.steps();
            double acc = 0.0;
            for (int l = 0; l < S; ++l)
                acc += trapezoid_weight(l, S) * tables_.g_ext(S - l, last) * chain[l];
            total_ += h_ * acc * sites_.weights[last];
            return;
        }
        const bool last_is_atom = last < sites_.atom_count;
        if (last_is_atom)
            used_[last] = true;
        std::vector<double> next(tables_.steps() + 1, 0.0);
        for (std::size_t s = 0; s < sites_.locations.size(); ++s) {
            if (s < sites_.atom_count && used_[s])
                continue;
            for (int k = 1; k <= tables_.steps(); ++k) {
                double acc = 0.0;
                for (int l = 0; l < k; ++l)
                    acc += trapezoid_weight(l, k) * tables_.g_site(k - l, s, last) * chain[l];
                next[k] = h_ * acc * sites_.weights[last];
            }
            next[0] = 0.0;
            extend(pos + 1, s, next);
        }
        if (last_is_atom)
            used_[last] = false;
    }

    const SiteSet& sites_;
    Tables& tables_;
    double h_;
    std::vector<bool> used_;
    int n_ = 0;
    double total_ = 0.0;
};

std::vector<double> series_terms(const NoiseField& field, const ScalarField& u0, int n_max,
                                 double t, PointView x, ProductMode mode,
                                 const KernelSpec& spec, const Grids& grids,
                                 const DriftChannel& drift)
{
    check_common(field, t, x, spec, grids);
    if (n_max < 0)
        throw ValidationError("solver: n_max must be >= 0");
    if (drift.enabled && mode == ProductMode::Star)
        throw ValidationError("solver: the drift channel belongs to the compensated product");
    check_drift(field, drift);

    std::vector<double> terms(n_max + 1, 0.0);
    terms[0] = heat_solve_initial(u0, t, x, spec, grids.space);
    if (n_max == 0)
        return terms;

    const SiteSet sites = gather_sites(field, drift.enabled ? &drift : nullptr);
    if (sites.locations.empty())
        return terms;
    if (mode == ProductMode::Diamond)
        check_tuple_budget(sites.locations.size(), n_max);
    Tables tables(sites, u0, x, spec, grids);

    if (mode == ProductMode::Star) {
        StarSweep sweep(sites, tables, grids);
        terms[1] = sweep.reduce();
        for (int n = 2; n <= n_max; ++n) {
            sweep.advance();
            terms[n] = sweep.reduce();
        }
    } else {
        DiamondSweep sweep(sites, tables, grids);
        for (int n = 1; n <= n_max; ++n)
            terms[n] = sweep.term(n);
    }
    return terms;
}

} // namespace

double chaos_term_star(const NoiseField& field, const ScalarField& u0, int n, double t,
                       PointView x, const KernelSpec& spec, const Grids& grids)
{
    if (n < 0)
        throw ValidationError("chaos_term_star: order must be >= 0");
    return series_terms(field, u0, n, t, x, ProductMode::Star, spec, grids, {}).back();
}

double chaos_term_diamond(const NoiseField& field, const ScalarField& u0, int n, double t,
                          PointView x, const KernelSpec& spec, const Grids& grids,
                          const DriftChannel& drift)
{
    if (n < 0)
        throw ValidationError("chaos_term_diamond: order must be >= 0");
    check_common(field, t, x, spec, grids);
    check_drift(field, drift);
    if (n == 0)
        return heat_solve_initial(u0, t, x, spec, grids.space);
    const SiteSet sites = gather_sites(field, drift.enabled ? &drift : nullptr);
    if (sites.locations.empty())
        return 0.0;
    check_tuple_budget(sites.locations.size(), n);
    Tables tables(sites, u0, x, spec, grids);
    return DiamondSweep(sites, tables, grids).term(n);
}

SeriesResult solve_series(const NoiseField& field, const ScalarField& u0, int n_max, double t,
                          PointView x, ProductMode mode, const KernelSpec& spec,
                          const Grids& grids, const DriftChannel& drift)
{
    SeriesResult out;
    out.terms = series_terms(field, u0, n_max, t, x, mode, spec, grids, drift);
    out.partial_sums.resize(out.terms.size());
    double running = 0.0;
    for (std::size_t n = 0; n < out.terms.size(); ++n) {
        running += out.terms[n];
        out.partial_sums[n] = running;
    }

    const RegimeReport report = regime(field.params.p, spec.domain.dim());
    const double beta = report.beta(1e-3);
    out.envelope_ratio.resize(out.terms.size());
    for (std::size_t n = 0; n < out.terms.size(); ++n) {
        if (beta >= 1.0) {
            out.envelope_ratio[n] = std::numeric_limits<double>::quiet_NaN();
        } else if (n == 0) {
            out.envelope_ratio[0] = std::abs(out.terms[0]);
        } else {
            const double shape =
                std::exp(n * (1.0 - beta) * (std::log(t) - std::log(static_cast<double>(n))));
            out.envelope_ratio[n] = std::abs(out.terms[n]) / shape;
        }
    }

    if (mode == ProductMode::Diamond)
        out.tilt_factor = std::exp(-big_atom_rate(field.params) * t);
    if (mode == ProductMode::Star && !report.star_regime_ok)
        out.regime_note = "uncompensated product outside its well-posed region (p = " +
                          fmt17(field.params.p) + ", d = " + std::to_string(report.d) + ")";
    if (mode == ProductMode::Diamond && !report.diamond_regime_ok)
        out.regime_note = "compensated product outside its well-posed region (p = " +
                          fmt17(field.params.p) + ", d = " + std::to_string(report.d) + ")";
    return out;
}

double tilt(double u_value, double t, const StableParams& params)
{
    if (!(t >= 0.0))
        throw ValidationError("tilt: t must be >= 0");
    return u_value * std::exp(-big_atom_rate(params) * t);
}

double tilt_inverse(double u_value, double t, const StableParams& params)
{
    if (!(t >= 0.0))
        throw ValidationError("tilt_inverse: t must be >= 0");
    return u_value * std::exp(big_atom_rate(params) * t);
}

} // namespace stableheat
