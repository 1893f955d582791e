#include "stableheat/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

struct SiteList {
    std::vector<PointView> locations;
    std::vector<double> weights;
    std::size_t atom_count = 0; // atoms first, pseudo-atoms after
};

SiteList collect_sites(const NoiseField& field, const DriftChannel* drift)
{
    SiteList sites;
    for (const auto& atom : field.atoms) {
        sites.locations.emplace_back(atom.location);
        sites.weights.push_back(atom.mass);
    }
    sites.atom_count = sites.locations.size();
    if (drift != nullptr && drift->enabled) {
        for (std::size_t q = 0; q < drift->grid.nodes.size(); ++q) {
            sites.locations.emplace_back(drift->grid.nodes[q]);
            sites.weights.push_back(-drift->density * drift->grid.weights[q]);
        }
    }
    return sites;
}

void check_budget(std::size_t site_count, int n)
{
    if (n < 0)
        throw ValidationError("multiple integral: order must be >= 0");
    const double estimate = std::pow(static_cast<double>(site_count), n);
    if (estimate > kTupleBudget)
        throw BudgetError("multiple integral: about " + fmt17(estimate) +
                          " tuples exceed the budget of " + fmt17(kTupleBudget) +
                          " (order " + std::to_string(n) + ", " +
                          std::to_string(site_count) + " sites)");
}

void require_distinct_first_coords(const NoiseField& field)
{
    for (std::size_t i = 0; i + 1 < field.atoms.size(); ++i)
        for (std::size_t j = i + 1; j < field.atoms.size(); ++j)
            if (field.atoms[i].location[0] == field.atoms[j].location[0])
                throw ValidationError("eval_In: atom first coordinates must be pairwise "
                                      "distinct (ordered-simplex reduction)");
}

/// Depth-first sum over admissible tuples. `used` tracks atoms only;
/// pseudo-atoms repeat freely under either rule.
class TupleSum {
public:
    TupleSum(const SiteList& sites, const NTupleFn& f, int n, TupleConstraint rule)
        : sites_(sites), f_(f), n_(n), rule_(rule), used_(sites.atom_count, false),
          args_(n)
    {
    }

    double run()
    {
        descend(0, 1.0, sites_.locations.size());
        return total_;
    }

private:
    void descend(int pos, double weight, std::size_t prev)
    {
        for (std::size_t s = 0; s < sites_.locations.size(); ++s) {
            const bool is_atom = s < sites_.atom_count;
            if (is_atom) {
                if (rule_ == TupleConstraint::PairwiseDistinct && used_[s])
                    continue;
                if (rule_ == TupleConstraint::AdjacentDistinct && s == prev)
                    continue;
            }
            args_[pos] = sites_.locations[s];
            const double w = weight * sites_.weights[s];
            if (pos + 1 == n_) {
                total_ += w * f_(args_);
            } else {
                if (is_atom)
                    used_[s] = true;
                descend(pos + 1, w, s);
                if (is_atom)
                    used_[s] = false;
            }
        }
    }

    const SiteList& sites_;
    const NTupleFn& f_;
    int n_;
    TupleConstraint rule_;
    std::vector<bool> used_;
    std::vector<PointView> args_;
    double total_ = 0.0;
};

} // namespace

double eval_Jn(const NoiseField& field, const NTupleFn& f, int n)
{
    const SiteList sites = collect_sites(field, nullptr);
    check_budget(sites.locations.size(), n);
    if (n == 0)
        return f({});
    return TupleSum(sites, f, n, TupleConstraint::AdjacentDistinct).run();
}

double eval_In(const NoiseField& field, const NTupleFn& f, int n, const DriftChannel& drift)
{
    require_distinct_first_coords(field);
    const SiteList sites = collect_sites(field, &drift);
    check_budget(sites.locations.size(), n);
    if (n == 0)
        return f({});
    // A pairwise-distinct tuple of atoms uses each atom at most once, which
    // is what makes the result affine in every individual mass.
    return TupleSum(sites, f, n, TupleConstraint::PairwiseDistinct).run();
}

double eval_In_ordered(const NoiseField& field, const NTupleFn& f, int n)
{
    require_distinct_first_coords(field);
    check_budget(field.atoms.size(), n);
    if (n == 0)
        return f({});
    if (static_cast<std::size_t>(n) > field.atoms.size())
        return 0.0;

    // Atoms sorted by ascending first coordinate; choosing index subsets in
    // order walks exactly the increasing-first-coordinate tuples.
    std::vector<std::size_t> order(field.atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return field.atoms[a].location[0] < field.atoms[b].location[0];
    });

    const NTupleFn sym = symmetrize(f, n);
    double factorial = 1.0;
    for (int j = 2; j <= n; ++j)
        factorial *= j;

    double total = 0.0;
    std::vector<std::size_t> pick(n);
    std::vector<PointView> args(n);
    // Enumerate combinations in lexicographic order.
    std::function<void(int, std::size_t, double)> choose = [&](int pos, std::size_t from,
                                                               double weight) {
        if (pos == n) {
            for (int j = 0; j < n; ++j)
                args[j] = field.atoms[order[pick[j]]].location;
            total += weight * sym(args);
            return;
        }
        for (std::size_t i = from; i < field.atoms.size(); ++i) {
            pick[pos] = i;
            choose(pos + 1, i + 1, weight * field.atoms[order[i]].mass);
        }
    };
    choose(0, 0, 1.0);
    return factorial * total;
}

NTupleFn symmetrize(NTupleFn f, int n)
{
    if (n < 1)
        throw ValidationError("symmetrize: order must be >= 1");
    if (n == 1)
        return f;
    return [f = std::move(f), n](std::span<const PointView> args) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<PointView> shuffled(n);
        double acc = 0.0;
        std::size_t count = 0;
        do {
            for (int j = 0; j < n; ++j)
                shuffled[j] = args[perm[j]];
            acc += f(shuffled);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return acc / static_cast<double>(count);
    };
}

} // namespace stableheat
