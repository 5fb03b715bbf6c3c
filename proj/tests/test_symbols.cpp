#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ilw/symbols.hpp"
#include "oracles.hpp"

using namespace ilw;

TEST_CASE("lambda_delta basics") {
  CHECK(lambda_delta(0, 1) == 0);
  CHECK(lambda_delta(0, 1e-3) == 0);
  CHECK_THROWS_AS(lambda_delta(1, 0), std::domain_error);
  CHECK_THROWS_AS(lambda_delta(1, -2), std::domain_error);
  // shallow-water limit: Lambda -> xi^2
  CHECK(std::abs(lambda_delta(1, 1e-6) - 1) < 1e-8);
}

TEST_CASE("lambda_delta agrees with the truncated series oracle") {
  // spec'd point: xi = 2, delta = 1, one million terms
  CHECK(std::abs(lambda_delta(2, 1) - oracles::lambda_series(2, 1, 1'000'000)) < 1e-9);
  // the acceptance grid at lighter truncation
  for (const Real delta : {1.0, 0.5, 0.1, 0.01}) {
    for (int xi = 1; xi <= 64; xi += 7) {
      const Real closed = lambda_delta(xi, delta);
      const Real series = oracles::lambda_series(xi, delta, 100'000);
      CHECK(std::abs(closed - series) < 1e-10 * series);
      CHECK(lambda_delta(-xi, delta) == closed);  // even
    }
  }
}

TEST_CASE("lambda_delta bounds and monotonicity") {
  for (const Real delta : {2.0, 1.0, 0.5, 0.1, 0.01}) {
    for (int xi = 1; xi <= 64; ++xi) {
      const Real v = lambda_delta(xi, delta);
      CHECK(v > 0);
      CHECK(v <= Real(xi) * xi * (1 + 1e-14));
      CHECK(v <= 3.0 / delta * xi * (1 + 1e-12));  // closed-form coth bound
    }
  }
  // strictly decreasing in delta at fixed xi
  for (const int xi : {1, 3, 17, 64}) {
    Real prev = lambda_delta(xi, 0.01);
    for (const Real delta : {0.05, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const Real cur = lambda_delta(xi, delta);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("h_delta matches its series and bounds") {
  CHECK(h_delta(0, 0.7) == 0);
  CHECK_THROWS_AS(h_delta(1, 0), std::domain_error);
  // (L3): h <= delta^2 xi^2, spec'd point delta = 0.1, xi = 1
  CHECK(h_delta(1, 0.1) <= 0.01);
  CHECK(std::abs(h_delta(1, 0.1) - oracles::h_series(1, 0.1, 1'000'000)) < 1e-12);
  for (const Real delta : {1.0, 0.5, 0.1, 0.01}) {
    for (int xi = 1; xi <= 64; xi += 3) {
      const Real h = h_delta(xi, delta);
      CHECK(h > 0);
      CHECK(h <= 1);
      CHECK(h <= delta * delta * xi * xi);
      CHECK(std::abs(h - oracles::h_series(xi, delta, 200'000)) < 1e-10 * std::max(h, 1e-12));
      // consistency with lambda
      CHECK(lambda_delta(xi, delta) == doctest::Approx(xi * xi * (1 - h)).epsilon(1e-13));
    }
  }
}

TEST_CASE("phase of each family member") {
  CHECK(phase(DispersionSymbol::kdv(), 2) == 8);
  CHECK(phase(DispersionSymbol::kdv(), -3) == -27);
  CHECK(phase(DispersionSymbol::bo(), -3) == -9);
  CHECK(phase(DispersionSymbol::bo(), 4) == 16);
  CHECK(std::abs(phase(DispersionSymbol::scaled_ilw(1e-6), 2) - 8) < 1e-6);
  // unscaled ILW carries the delta/3 factor
  const Real delta = 0.37;
  CHECK(phase(DispersionSymbol::ilw(delta), 5) ==
        doctest::Approx(delta / 3 * 5 * lambda_delta(5, delta)).epsilon(1e-14));
  // missing delta
  DispersionSymbol bad;
  bad.kind = SymbolKind::ScaledILW;
  CHECK_THROWS_AS(phase(bad, 1), ConfigError);
  CHECK_THROWS_AS(DispersionSymbol::scaled_ilw(0), ConfigError);
  // oddness
  for (const auto& s : {DispersionSymbol::kdv(), DispersionSymbol::scaled_ilw(0.3),
                        DispersionSymbol::ilw(0.3), DispersionSymbol::bo()}) {
    for (int xi = 1; xi <= 20; ++xi) {
      CHECK(phase(s, -xi) == doctest::Approx(-phase(s, xi)).epsilon(1e-14));
    }
  }
}

TEST_CASE("resonance function") {
  CHECK(resonance(DispersionSymbol::kdv(), 3, 1, 2) == -18);
  CHECK_THROWS_AS(resonance(DispersionSymbol::kdv(), 3, 1, 1), std::domain_error);
  // -xi^3 + xi1^3 + xi2^3 = -3 xi xi1 xi2 on the plane
  CHECK(std::abs(resonance(DispersionSymbol::kdv(), 3, 1, 2) - (-27.0 + 1 + 8)) == 0);
  // scaled ILW converges to KdV
  CHECK(std::abs(resonance(DispersionSymbol::scaled_ilw(1e-4), 3, 1, 2) - (-18)) < 1e-5);
  Real prev = 1e9;
  for (const Real delta : {0.5, 0.25, 0.125, 0.0625}) {
    const Real gap = std::abs(resonance(DispersionSymbol::scaled_ilw(delta), 3, 1, 2) - (-18));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("resonance difference identity (Xi1 last line)") {
  std::mt19937_64 rng(17);
  for (const Real delta : {0.5, 0.1}) {
    for (int trial = 0; trial < 200; ++trial) {
      const int xi1 = int(rng() % 41) - 20;
      const int xi2 = int(rng() % 41) - 20;
      const int xi = xi1 + xi2;
      if (xi == 0 || xi1 == 0 || xi2 == 0) continue;
      const Real direct = resonance(DispersionSymbol::scaled_ilw(delta), xi, xi1, xi2) -
                          resonance(DispersionSymbol::kdv(), xi, xi1, xi2);
      const Real stable = resonance_diff_scaled(delta, xi, xi1, xi2);
      CHECK(std::abs(direct - stable) < 1e-10 * std::max(Real(1), std::abs(stable)));
    }
  }
}

TEST_CASE("phi_delta bounds") {
  CHECK(std::abs(phi_delta(0, 3, 1, 2, 0.5)) == 0);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int xi1 = int(rng() % 33) - 16;
    const int xi2 = int(rng() % 33) - 16;
    const int xi = xi1 + xi2;
    if (xi == 0 || xi1 == 0 || xi2 == 0) continue;
    const Real t = (oracles::uniform01(rng) - 0.5) * 4;
    const Real delta = 0.05 + oracles::uniform01(rng);
    const Complex phi = phi_delta(t, xi, xi1, xi2, delta);
    CHECK(std::abs(phi) <= 2 + 1e-14);
    const Real mvt = std::abs(t) * std::abs(resonance_diff_scaled(delta, xi, xi1, xi2));
    CHECK(std::abs(phi) <= mvt * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("a_delta is stable and nonnegative") {
  CHECK(a_delta(0, 0.5) == 0);
  CHECK_THROWS_AS(a_delta(1, 0), std::domain_error);
  // Taylor remainder: |a - delta xi^2| <= (2/3) delta^2 |xi|^3 at leading
  // order (the next term contributes the delta|xi| slack)
  for (const Real delta : {1e-6, 1e-5, 1e-4}) {
    for (const Real xi : {0.5, 1.0, 2.0, 5.0, -3.0}) {
      const Real a = a_delta(xi, delta);
      CHECK(std::abs(a - delta * xi * xi) <=
            2.0 / 3 * delta * delta * std::abs(xi * xi * xi) * (1 + delta * std::abs(xi)));
    }
  }
  for (const Real delta : {0.01, 0.1, 1.0}) {
    for (Real xi = -50; xi <= 50; xi += 0.5) {
      CHECK(a_delta(xi, delta) >= 0);
    }
  }
}

TEST_CASE("multiplier table layout") {
  const Grid grid(32);
  const MultiplierTable table = build_multiplier_table(grid, DispersionSymbol::kdv());
  CHECK(table.at(0) == 0);
  for (int xi = 1; xi <= grid.band(); ++xi) {
    CHECK(table.at(-xi) == -table.at(xi));
    CHECK(table.at(xi) == phase(DispersionSymbol::kdv(), xi));
  }
}
