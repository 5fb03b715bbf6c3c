#include "ilw/profiles.hpp"

#include <cmath>
#include <random>

namespace ilw {
namespace {

Real uniform01(std::mt19937_64& rng) {
  return Real(rng() >> 11) * 0x1p-53;  // [0, 1)
}

// Box-Muller; avoids std::normal_distribution so streams are stable
// across standard-library versions.
Real gaussian(std::mt19937_64& rng) {
  Real u1 = uniform01(rng);
  while (u1 == 0) u1 = uniform01(rng);
  const Real u2 = uniform01(rng);
  return std::sqrt(-2 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

SpectralField make_random_band_limited(const Grid& grid, int band, std::uint64_t seed) {
  if (band < 1 || band > grid.band()) throw ConfigError("make_random_band_limited: band outside grid");
  std::mt19937_64 rng(seed);
  SpectralField f(grid);
  for (int xi = 1; xi <= band; ++xi) {
    const Real envelope = 1.0 / (1.0 + Real(xi) * Real(xi));
    const Complex c = envelope * Complex(gaussian(rng), gaussian(rng));
    f.set_coeff(xi, c);
    f.set_coeff(-xi, std::conj(c));
  }
  f.set_mean_zero();
  const Real norm = l2_norm(f);
  if (norm > 0) f *= 1 / norm;
  return f;
}

SpectralField make_profile(const Grid& grid, const std::string& name, Real amplitude, int band,
                           std::uint64_t seed) {
  if (name == "cos") {
    SpectralField f(grid);
    f.set_coeff(1, Complex(amplitude * kSqrtTwoPi / 2, 0));
    f.set_coeff(-1, Complex(amplitude * kSqrtTwoPi / 2, 0));
    return f;
  }
  if (name == "soliton") {
    VectorXd samples(grid.modes);
    for (int n = 0; n < grid.modes; ++n) {
      const Real s = 1 / std::cosh(2 * (grid.node(n) - kTwoPi / 2));
      samples[n] = amplitude * s * s;
    }
    return forward(grid, samples);
  }
  if (name == "random") {
    SpectralField f = make_random_band_limited(grid, band, seed);
    f *= amplitude;
    return f;
  }
  throw ConfigError("make_profile: unknown profile '" + name + "'");
}

}  // namespace ilw
