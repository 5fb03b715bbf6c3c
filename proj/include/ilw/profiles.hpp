#pragma once

// Named initial-data profiles used by experiments and tests.

#include <cstdint>
#include <string>

#include "ilw/spectral.hpp"

namespace ilw {

/// Hermitian band-limited field with seeded gaussian coefficients and a
/// 1/(1+xi^2) envelope, normalized to unit L^2.  Deterministic for a given
/// seed (own Box-Muller over mt19937_64, no library distributions).
SpectralField make_random_band_limited(const Grid& grid, int band, std::uint64_t seed);

/// Profiles: "cos" (a cos x, built spectrally), "soliton" (a sech^2
/// bump centred at pi), "random" (seeded band-limited, L^2 norm a).
/// Mean removal is the caller's business (galilean_reduce).
SpectralField make_profile(const Grid& grid, const std::string& name, Real amplitude, int band,
                           std::uint64_t seed);

}  // namespace ilw
