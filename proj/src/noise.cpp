#include "stableheat/noise.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stableheat/errors.hpp"
#include "stableheat/util.hpp"

namespace stableheat {

namespace {

bool is_power_of_two(double v)
{
    if (!(v > 0.0) || !std::isfinite(v))
        return false;
    int exp = 0;
    return std::frexp(v, &exp) == 0.5;
}

/// Inverse CDF of the band-restricted power law. u in (0,1] maps onto
/// (eps, K], with u = 1 hitting K exactly.
double mass_quantile(const StableParams& params, double u)
{
    const double lo = std::pow(params.eps, -params.p);
    const double hi = std::pow(params.K, -params.p);
    return std::pow(lo - u * (lo - hi), -1.0 / params.p);
}

void sort_atoms(std::vector<Atom>& atoms)
{
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        if (a.mass != b.mass)
            return a.mass > b.mass;
        return a.location[0] < b.location[0];
    });
}

void draw_location(std::mt19937_64& rng, const BoxDomain& domain, Point& out)
{
    out.resize(domain.lower.size());
    for (std::size_t a = 0; a < out.size(); ++a)
        out[a] = domain.lower[a] + uniform_halfopen(rng) * (domain.upper[a] - domain.lower[a]);
}

NoiseField assemble_field(const StableParams& params, const BoxDomain& domain,
                          std::uint64_t seed, std::mt19937_64& rng, std::size_t count)
{
    NoiseField field;
    field.params = params;
    field.domain = domain;
    field.seed = seed;
    field.compensator_density = params.p > 1.0 ? compensator_density(params) : 0.0;
    field.atoms.resize(count);
    for (auto& atom : field.atoms) {
        draw_location(rng, domain, atom.location);
        atom.mass = mass_quantile(params, uniform_closed_above(rng));
        atom.type_index = classify_type(atom.mass);
    }

    // Duplicate first coordinates break the ordered-simplex reduction of the
    // multiple integrals, so redraw the later atom until all are distinct.
    bool collided = true;
    while (collided) {
        collided = false;
        for (std::size_t i = 0; i + 1 < field.atoms.size() && !collided; ++i)
            for (std::size_t j = i + 1; j < field.atoms.size() && !collided; ++j)
                if (field.atoms[i].location[0] == field.atoms[j].location[0]) {
                    draw_location(rng, domain, field.atoms[j].location);
                    collided = true;
                }
    }

    sort_atoms(field.atoms);
    return field;
}

} // namespace

void StableParams::validate() const
{
    if (!std::isfinite(p) || !(p > 0.0) || !(p < 2.0))
        throw ValidationError("StableParams: p must lie in (0,2), got " + fmt17(p));
    if (p == 1.0)
        throw ValidationError("StableParams: p = 1 is excluded (small-jump mean diverges; "
                              "the drift closed form has a (p-1) denominator)");
    if (!std::isfinite(c_p) || !(c_p > 0.0))
        throw ValidationError("StableParams: c_p must be positive");
    if (!is_power_of_two(K))
        throw ValidationError("StableParams: K must be a power of two, got " + fmt17(K));
    if (!std::isfinite(eps) || !(eps > 0.0) || !(eps <= K))
        throw ValidationError("StableParams: eps must lie in (0, K]");
}

double total_intensity(const StableParams& params, const BoxDomain& domain)
{
    params.validate();
    domain.validate();
    return domain.volume() * params.c_p *
           (std::pow(params.eps, -params.p) - std::pow(params.K, -params.p)) / params.p;
}

double compensator_density(const StableParams& params)
{
    params.validate();
    if (params.p < 1.0)
        throw ValidationError("compensator_density: defined only for p > 1");
    return params.c_p *
           (std::pow(params.eps, 1.0 - params.p) - std::pow(params.K, 1.0 - params.p)) /
           (params.p - 1.0);
}

double big_atom_rate(const StableParams& params)
{
    params.validate();
    return params.c_p / params.p * std::pow(params.K, -params.p);
}

double discarded_small_mass(const StableParams& params, const BoxDomain& domain)
{
    params.validate();
    domain.validate();
    if (params.p > 1.0)
        throw ValidationError("discarded_small_mass: infinite for p > 1 "
                              "(use the compensated construction instead)");
    return domain.volume() * params.c_p * std::pow(params.eps, 1.0 - params.p) / (1.0 - params.p);
}

int classify_type(double mass)
{
    if (!std::isfinite(mass) || !(mass > 0.0))
        throw ValidationError("classify_type: mass must be positive and finite");
    int n = static_cast<int>(std::floor(-std::log2(mass)));
    // log2 roundoff can misplace exact band boundaries; fix with exact
    // binary-power comparisons.
    while (mass > std::ldexp(1.0, -n))
        --n;
    while (mass <= std::ldexp(1.0, -(n + 1)))
        ++n;
    return n;
}

double mass_cdf(const StableParams& params, double y)
{
    params.validate();
    if (y <= params.eps)
        return 0.0;
    if (y >= params.K)
        return 1.0;
    const double lo = std::pow(params.eps, -params.p);
    const double hi = std::pow(params.K, -params.p);
    return (lo - std::pow(y, -params.p)) / (lo - hi);
}

NoiseField sample_field(const StableParams& params, const BoxDomain& domain, std::uint64_t seed)
{
    const double mean = total_intensity(params, domain);
    std::mt19937_64 rng(seed);
    const std::size_t count = static_cast<std::size_t>(poisson_count(rng, mean));
    return assemble_field(params, domain, seed, rng, count);
}

NoiseField sample_field_with_count(const StableParams& params, const BoxDomain& domain,
                                   std::uint64_t seed, std::size_t count)
{
    params.validate();
    domain.validate();
    std::mt19937_64 rng(seed);
    return assemble_field(params, domain, seed, rng, count);
}

NoiseField truncate_large(const NoiseField& field, double K_new)
{
    field.params.validate();
    if (!is_power_of_two(K_new) || !(K_new > field.params.eps) || !(K_new <= field.params.K))
        throw ValidationError("truncate_large: K_new must be a power of two in (eps, K]");
    NoiseField out = field;
    out.params.K = K_new;
    std::erase_if(out.atoms, [K_new](const Atom& a) { return a.mass > K_new; });
    out.compensator_density =
        out.params.p > 1.0 ? compensator_density(out.params) : 0.0;
    return out;
}

NoiseField scale_atom(const NoiseField& field, std::size_t index, double z)
{
    if (index >= field.atoms.size())
        throw ValidationError("scale_atom: atom index out of range");
    if (!(z >= 1.0) || !(z < 2.0))
        throw ValidationError("scale_atom: z must lie in [1, 2)");
    NoiseField out = field;
    out.atoms[index].mass *= z;
    out.atoms[index].type_index = classify_type(out.atoms[index].mass);
    return out;
}

void write_field_csv(std::ostream& os, const NoiseField& field)
{
    const int d = field.domain.dim();
    os << "atom_index";
    for (int a = 1; a <= d; ++a)
        os << ",x_" << a;
    os << ",mass,type_index\n";
    for (std::size_t i = 0; i < field.atoms.size(); ++i) {
        os << i;
        for (int a = 0; a < d; ++a)
            os << ',' << fmt17(field.atoms[i].location[a]);
        os << ',' << fmt17(field.atoms[i].mass) << ',' << field.atoms[i].type_index << '\n';
    }
}

std::vector<Atom> read_field_csv(std::istream& is, int dim)
{
    std::vector<Atom> atoms;
    std::string line;
    if (!std::getline(is, line))
        throw ValidationError("read_field_csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ','))
            cells.push_back(cell);
        if (static_cast<int>(cells.size()) != dim + 3)
            throw ValidationError("read_field_csv: expected " + std::to_string(dim + 3) +
                                  " columns, got " + std::to_string(cells.size()));
        Atom atom;
        atom.location.resize(dim);
        try {
            for (int a = 0; a < dim; ++a)
                atom.location[a] = std::stod(cells[1 + a]);
            atom.mass = std::stod(cells[dim + 1]);
            atom.type_index = std::stoi(cells[dim + 2]);
        } catch (const std::exception&) {
            throw ValidationError("read_field_csv: malformed number in line \"" + line + "\"");
        }
        atoms.push_back(std::move(atom));
    }
    return atoms;
}

} // namespace stableheat
