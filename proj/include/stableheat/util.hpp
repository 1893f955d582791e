#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace stableheat {

/// Round-trip-exact decimal formatting (17 significant digits), used by all
/// CSV writers so that repeated runs produce byte-identical files.
std::string fmt17(double v);

/// splitmix64 finalizer (Steele/Lea/Flood mixing constants).
std::uint64_t mix64(std::uint64_t x);

/// Stream seed for replicate r: mix64(master + (r+1) * golden gamma).
/// Equals the (r+1)-th output of a splitmix64 sequence seeded with master,
/// so distinct replicates always get distinct seeds.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t r);

/// Uniform draw in [0,1) from the top 53 bits of the generator output.
double uniform_halfopen(std::mt19937_64& rng);

/// Uniform draw in (0,1]. Used for inverse-CDF mass sampling so the lower
/// cutoff itself is never returned.
double uniform_closed_above(std::mt19937_64& rng);

/// Exact Poisson count via Knuth's product method, chunked so that the
/// running product never underflows for large means. Deterministic in the
/// generator state; no implementation-defined library distributions.
std::uint64_t poisson_count(std::mt19937_64& rng, double mean);

} // namespace stableheat
