#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ilw/spectral.hpp"
#include "oracles.hpp"

using namespace ilw;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(7), ConfigError);
  CHECK_THROWS_AS(Grid(6), ConfigError);
  CHECK_NOTHROW(Grid(8));
  CHECK(Grid(16).nyquist() == 8);
  CHECK(Grid(16).band() == 7);
}

TEST_CASE("forward of a constant puts everything in the dc mode") {
  const Grid grid(16);
  const SpectralField f = forward(grid, VectorXd(VectorXd::Ones(16)));
  CHECK(f.coeff(0).real() == doctest::Approx(kSqrtTwoPi).epsilon(1e-14));
  for (int xi = 1; xi <= grid.band(); ++xi) {
    CHECK(std::abs(f.coeff(xi)) < 1e-13);
  }
}

TEST_CASE("forward of cos(x) is a single symmetric pair") {
  const Grid grid(32);
  VectorXd samples(grid.modes);
  for (int n = 0; n < grid.modes; ++n) samples[n] = std::cos(grid.node(n));
  const SpectralField f = forward(grid, samples);
  CHECK(f.coeff(1).real() == doctest::Approx(kSqrtTwoPi / 2).epsilon(1e-14));
  CHECK(f.coeff(-1).real() == doctest::Approx(kSqrtTwoPi / 2).epsilon(1e-14));
  CHECK(std::abs(f.coeff(1).imag()) < 1e-14);
  CHECK(std::abs(f.coeff(2)) < 1e-13);
}

TEST_CASE("round trip forward/inverse at several sizes") {
  for (const int m : {16, 64, 256, 12, 20}) {
    const Grid grid(m);
    const VectorXd samples = oracles::random_samples(m, 100 + m);
    // the Nyquist amplitude is dropped by construction; a second pass
    // through the transform pair must reproduce the first exactly
    const SpectralField f = forward(grid, samples);
    const VectorXd back = inverse_real(f);
    const SpectralField f2 = forward(grid, back);
    const VectorXd back2 = inverse_real(f2);
    CHECK((back - back2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.data() - f2.data()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("inverse then forward is the identity on coefficients") {
  for (const int m : {16, 64, 256}) {
    const SpectralField f = oracles::random_field(Grid(m), 7 + m);
    const SpectralField g = forward(f.grid(), VectorXcd(inverse(f)));
    CHECK((f.data() - g.data()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("plancherel: spectral norm equals quadrature norm") {
  SUBCASE("zero field") { CHECK(l2_norm(SpectralField(Grid(16))) == 0); }
  SUBCASE("cos(x) has norm sqrt(pi)") {
    const Grid grid(64);
    VectorXd samples(grid.modes);
    for (int n = 0; n < grid.modes; ++n) samples[n] = std::cos(grid.node(n));
    CHECK(l2_norm(forward(grid, samples)) == doctest::Approx(std::sqrt(oracles::kPi)).epsilon(1e-13));
  }
  SUBCASE("random fields") {
    for (const int m : {16, 64, 256}) {
      const SpectralField f = oracles::random_field(Grid(m), 11 + m);
      const Real spectral = l2_norm(f);
      const Real quad = oracles::quadrature_l2(inverse_real(f));
      CHECK(std::abs(spectral - quad) < 1e-12 * quad);
    }
  }
}

TEST_CASE("projector splits and recombines exactly") {
  const SpectralField f = oracles::random_field(Grid(64), 21);
  SUBCASE("cos survives a low cut above it") {
    SpectralField c{Grid(16)};
    c.set_coeff(1, Complex(1, 0));
    c.set_coeff(-1, Complex(1, 0));
    const SpectralField low = project(c, 2, Band::Low);
    CHECK((low.data() - c.data()).cwiseAbs().maxCoeff() == 0);
  }
  SUBCASE("cos(3x) dies under a low cut at 2") {
    SpectralField c{Grid(16)};
    c.set_coeff(3, Complex(1, 0));
    c.set_coeff(-3, Complex(1, 0));
    CHECK(l2_norm(project(c, 2, Band::Low)) == 0);
  }
  SUBCASE("completeness and orthogonality") {
    for (const Real n : {1.0, 2.0, 7.5, 31.0}) {
      const SpectralField low = project(f, n, Band::Low);
      const SpectralField high = project(f, n, Band::High);
      CHECK((low.data() + high.data() - f.data()).cwiseAbs().maxCoeff() == 0);
      const Real sum = l2_norm(low) * l2_norm(low) + l2_norm(high) * l2_norm(high);
      CHECK(sum == doctest::Approx(l2_norm(f) * l2_norm(f)).epsilon(1e-13));
    }
  }
  SUBCASE("cutoff must be positive") { CHECK_THROWS_AS(project(f, 0, Band::Low), ConfigError); }
}

TEST_CASE("convolve matches the stated convention") {
  SUBCASE("single exponential probe: e^{ix} squared lands on xi = 2") {
    SpectralField f{Grid(16)};
    f.set_coeff(1, Complex(kSqrtTwoPi, 0));  // non-Hermitian single-mode probe
    const SpectralField prod = convolve(f, f);
    CHECK(prod.coeff(2).real() == doctest::Approx(kSqrtTwoPi).epsilon(1e-13));
    for (int xi = -7; xi <= 7; ++xi) {
      if (xi != 2) CHECK(std::abs(prod.coeff(xi)) < 1e-13);
    }
  }
  SUBCASE("zero factor annihilates") {
    const SpectralField f = oracles::random_field(Grid(32), 3);
    CHECK(l2_norm(convolve(f, SpectralField(Grid(32)))) == 0);
  }
  SUBCASE("random fields match the direct lattice sum") {
    for (const int m : {16, 32, 64}) {
      const SpectralField f = oracles::random_field(Grid(m), 40 + m);
      const SpectralField g = oracles::random_field(Grid(m), 50 + m);
      const SpectralField fast = convolve(f, g);
      const SpectralField direct = oracles::direct_convolution(f, g);
      CHECK((fast.data() - direct.data()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("galilean reduction records the removed mean") {
  const Grid grid(32);
  SUBCASE("cos(x) + 1/2") {
    VectorXd samples(grid.modes);
    for (int n = 0; n < grid.modes; ++n) samples[n] = std::cos(grid.node(n)) + 0.5;
    const auto [reduced, mean] = galilean_reduce(forward(grid, samples));
    CHECK(mean == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(reduced.mean_zero());
    CHECK(reduced.coeff(0) == Complex(0, 0));
    CHECK(reduced.coeff(1).real() == doctest::Approx(kSqrtTwoPi / 2).epsilon(1e-13));
  }
  SUBCASE("already mean-zero stays put") {
    const SpectralField f = oracles::random_field(grid, 9, true);
    const auto [reduced, mean] = galilean_reduce(f);
    CHECK(mean == 0);
    CHECK((reduced.data() - f.data()).cwiseAbs().maxCoeff() == 0);
  }
  SUBCASE("constant collapses to zero") {
    const auto [reduced, mean] = galilean_reduce(forward(grid, VectorXd(2 * VectorXd::Ones(32))));
    CHECK(mean == doctest::Approx(2).epsilon(1e-14));
    CHECK(l2_norm(reduced) < 1e-13);
  }
}

TEST_CASE("hermitian symmetry is preserved by the module operations") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SpectralField f = oracles::random_field(Grid(64), seed);
    const SpectralField g = oracles::random_field(Grid(64), seed + 100);
    CHECK(f.hermitian_defect() < 1e-12);
    CHECK(project(f, 10, Band::Low).hermitian_defect() < 1e-12);
    CHECK(project(f, 10, Band::High).hermitian_defect() < 1e-12);
    CHECK(convolve(f, g).hermitian_defect() < 1e-12);
    CHECK(galilean_reduce(f).first.hermitian_defect() < 1e-12);
    CHECK(forward(f.grid(), inverse_real(f)).hermitian_defect() < 1e-12);
  }
}

TEST_CASE("field records round trip") {
  SpectralField f = oracles::random_field(Grid(24), 77);
  f.set_mean_zero();
  const SpectralField back = from_record(to_record(f));
  CHECK(back.grid().modes == 24);
  CHECK(back.mean_zero());
  CHECK((back.data() - f.data()).cwiseAbs().maxCoeff() == 0);
  CHECK_THROWS_AS(from_record("bogus"), ConfigError);
}

TEST_CASE("length mismatch is a configuration error") {
  CHECK_THROWS_AS(forward(Grid(16), VectorXd(VectorXd::Ones(15))), ConfigError);
}
