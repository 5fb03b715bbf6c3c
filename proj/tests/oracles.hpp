#pragma once

// Independent oracles for the test suites.  Everything here is computed
// by a different route than the implementation it checks: direct lattice
// sums, truncated series with integral tail estimates, quadrature, and
// dense matrix powers.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "ilw/spectral.hpp"

namespace oracles {

using ilw::Complex;
using ilw::Grid;
using ilw::Real;
using ilw::SpectralField;

constexpr Real kPi = 3.14159265358979323846264338328;

// Direct O(M^2) lattice convolution with the 1/sqrt(2pi) normalization.
inline SpectralField direct_convolution(const SpectralField& f, const SpectralField& g) {
  const int band = f.grid().band();
  SpectralField out(f.grid());
  for (int xi = -band; xi <= band; ++xi) {
    Complex acc(0, 0);
    for (int eta = -band; eta <= band; ++eta) {
      const int other = xi - eta;
      if (other < -band || other > band) continue;
      acc += f.coeff(eta) * g.coeff(other);
    }
    out.set_coeff(xi, acc / ilw::kSqrtTwoPi);
  }
  return out;
}

// Trapezoid-exact quadrature L^2 norm of equispaced samples.
inline Real quadrature_l2(const Eigen::VectorXd& samples) {
  return std::sqrt(samples.squaredNorm() * ilw::kTwoPi / Real(samples.size()));
}

// Truncated multiplier series 6 xi^2 sum_k 1/(k^2 pi^2 + z^2) with an
// integral (midpoint) tail bound; independent of any coth evaluation.
inline Real lambda_series(Real xi, Real delta, long terms) {
  const Real z = delta * xi;
  Real sum = 0;
  for (long k = terms; k >= 1; --k) sum += 1.0 / (Real(k) * Real(k) * kPi * kPi + z * z);
  const Real a = Real(terms) + 0.5;
  // pi/2 - atan(y) written as atan(1/y) to dodge the cancellation
  const Real tail = (std::abs(z) > 0) ? std::atan(std::abs(z) / (a * kPi)) / (kPi * std::abs(z))
                                      : 1.0 / (kPi * kPi * a);
  return 6 * xi * xi * (sum + tail);
}

// Series form of h with the partial-fraction tail.
inline Real h_series(Real xi, Real delta, long terms) {
  const Real z = delta * xi;
  Real sum = 0;
  for (long k = terms; k >= 1; --k) {
    const Real kp = Real(k) * Real(k) * kPi * kPi;
    sum += 1.0 / (kp * (kp + z * z));
  }
  const Real a = Real(terms) + 0.5;
  // integral of 6 z^2 / (k^2 pi^2 (k^2 pi^2 + z^2)) dk from a to infinity
  Real tail = 0;
  if (std::abs(z) > 0) {
    tail = 6.0 / (kPi * kPi * a) - 6.0 * std::atan(std::abs(z) / (a * kPi)) / (kPi * std::abs(z));
  }
  return 6 * z * z * sum + tail;
}

// sum_{j=2}^{jmax} tr(A^j)/j by repeated dense multiplication.
inline Real trace_series(const Eigen::MatrixXcd& a, int jmax) {
  Eigen::MatrixXcd power = a;
  Real acc = 0;
  for (int j = 2; j <= jmax; ++j) {
    power = power * a;
    acc += power.trace().real() / j;
  }
  return acc;
}

// Deterministic random helpers (own gaussian; library distributions are
// not pinned across standard-library versions).
inline Real uniform01(std::mt19937_64& rng) { return Real(rng() >> 11) * 0x1p-53; }

inline Real gaussian(std::mt19937_64& rng) {
  Real u1 = uniform01(rng);
  while (u1 == 0) u1 = uniform01(rng);
  return std::sqrt(-2 * std::log(u1)) * std::cos(ilw::kTwoPi * uniform01(rng));
}

inline Eigen::VectorXd random_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = gaussian(rng);
  return out;
}

// Hermitian random field over the full stored band (with dc term unless
// mean_zero is requested).
inline SpectralField random_field(const Grid& grid, std::uint64_t seed, bool mean_zero = false) {
  std::mt19937_64 rng(seed);
  SpectralField f(grid);
  if (!mean_zero) f.set_coeff(0, Complex(gaussian(rng), 0));
  for (int xi = 1; xi <= grid.band(); ++xi) {
    const Complex c(gaussian(rng), gaussian(rng));
    f.set_coeff(xi, c);
    f.set_coeff(-xi, std::conj(c));
  }
  if (mean_zero) f.set_mean_zero();
  return f;
}

}  // namespace oracles
