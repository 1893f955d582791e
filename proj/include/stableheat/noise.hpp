#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stableheat/domain.hpp"

namespace stableheat {

/// Parameters of the one-sided stable jump intensity c_p * y^{-(p+1)} dy,
/// restricted to the mass band (eps, K].
///
/// p = 1 is excluded: the compensated construction needs p != 1 (the
/// small-jump mean diverges logarithmically there and the drift closed
/// form has a (p-1) denominator).
struct StableParams {
    double p = 0.5;   ///< stability index, in (0,2) and != 1
    double c_p = 1.0; ///< intensity scale, > 0
    double eps = 0.0; ///< small-mass cutoff, in (0, K]; eps = K is the empty band
    double K = 1.0;   ///< large-mass cutoff, an exact power of two > 0

    void validate() const;
};

/// One Poisson atom: a location in the box and a positive mass.
/// type_index n is the dyadic band of the mass: 2^{-(n+1)} < mass <= 2^{-n}.
struct Atom {
    Point location;
    double mass = 0.0;
    int type_index = 0;
};

/// A sampled truncated noise realization. Atoms are stored sorted by
/// decreasing mass (ties broken by ascending first coordinate), and their
/// first coordinates are pairwise distinct; both properties are established
/// by sample_field. compensator_density is the small-atom drift (per unit
/// volume) subtracted in the compensated regime; it is 0 when p < 1.
struct NoiseField {
    StableParams params;
    BoxDomain domain;
    std::vector<Atom> atoms;
    double compensator_density = 0.0;
    std::uint64_t seed = 0;
};

/// Expected atom count: |D| * c_p * (eps^{-p} - K^{-p}) / p.
double total_intensity(const StableParams& params, const BoxDomain& domain);

/// Small-atom drift density for p > 1:
/// integral of y against the intensity over the band,
/// c_p * (eps^{1-p} - K^{1-p}) / (p - 1). Throws for p < 1.
double compensator_density(const StableParams& params);

/// Rate per unit space-time volume of atoms above the cutoff K:
/// (c_p / p) * K^{-p}. These are the atoms removed by truncation.
double big_atom_rate(const StableParams& params);

/// Expected total mass of the discarded sub-eps atoms, |D| * c_p *
/// eps^{1-p} / (1-p). Finite only for p < 1 (throws otherwise); a
/// diagnostic for how much drift the eps-cutoff ignores in that regime.
double discarded_small_mass(const StableParams& params, const BoxDomain& domain);

/// Dyadic band index of a mass: the unique n with 2^{-(n+1)} < mass <= 2^{-n}.
/// Exact at band boundaries (mass = 2^{-n} maps to n). Throws for
/// nonpositive or non-finite mass.
int classify_type(double mass);

/// Truncated power-law mass CDF on (eps, K]:
/// F(y) = (eps^{-p} - y^{-p}) / (eps^{-p} - K^{-p}), clamped to [0,1].
double mass_cdf(const StableParams& params, double y);

/// Draws one field: a Poisson(total_intensity) atom count, i.i.d. uniform
/// locations, masses by inverse-CDF of the band-restricted power law.
/// Deterministic in the seed. Draw order is pinned (count, then per atom
/// the d location coordinates followed by the mass); duplicate first
/// coordinates are resolved by redrawing the later atom's location.
NoiseField sample_field(const StableParams& params, const BoxDomain& domain, std::uint64_t seed);

/// sample_field variant with the atom count forced, for controlled test
/// configurations. Uses the same per-atom draw order as sample_field.
NoiseField sample_field_with_count(const StableParams& params, const BoxDomain& domain,
                                   std::uint64_t seed, std::size_t count);

/// Removes every atom of mass above K_new (which must lie in (eps, K] and
/// itself be a power of two) and updates params/compensator accordingly.
/// Composing two truncations equals the single coarser one.
NoiseField truncate_large(const NoiseField& field, double K_new);

/// Returns a copy with atom i's mass multiplied by z in [1,2) and its type
/// recomputed. All other atoms, and the list order, are unchanged; the
/// scaled mass may exceed K (the mass window is a sampling guarantee, not
/// an invariant of transformed fields).
NoiseField scale_atom(const NoiseField& field, std::size_t index, double z);

/// Writes the canonical atom table:
/// atom_index,x_1,...,x_d,mass,type_index with 17-significant-digit floats.
void write_field_csv(std::ostream& os, const NoiseField& field);

/// Parses the canonical atom table back into (location, mass, type) rows.
/// Round-trips write_field_csv exactly. Throws ValidationError on malformed
/// input.
std::vector<Atom> read_field_csv(std::istream& is, int dim);

} // namespace stableheat
