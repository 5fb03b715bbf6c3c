#include "ilw/symbols.hpp"

#include <cmath>

namespace ilw {
namespace {

void require_delta(Real delta) {
  if (!(delta > 0)) throw std::domain_error("delta must be positive");
}

// h(z) for z = delta*xi, where Lambda = xi^2 (1 - h).  Even in z.
// The direct form 1 - 3(z coth z - 1)/z^2 cancels near z = 0, so small
// arguments use the Bernoulli series; the branch point 0.25 keeps both
// sides below ~1e-11 relative error (the spec'd 1e-4 threshold leaves a
// band of O(1e-8) cancellation noise, see decisions ledger).
Real h_of_z(Real z) {
  const Real z2 = z * z;
  if (std::abs(z) <= 0.25) {
    return z2 * (1.0 / 15 + z2 * (-2.0 / 315 + z2 * (1.0 / 1575 + z2 * (-2.0 / 31185 + z2 * (1382.0 / 212837625)))));
  }
  const Real zcoth = z / std::tanh(z);
  return 1.0 - 3.0 * (zcoth - 1.0) / z2;
}

}  // namespace

Real lambda_delta(Real xi, Real delta) {
  require_delta(delta);
  if (xi == 0) return 0;
  return xi * xi * (1.0 - h_of_z(delta * xi));
}

Real h_delta(Real xi, Real delta) {
  require_delta(delta);
  if (xi == 0) return 0;  // every series term vanishes
  return h_of_z(delta * xi);
}

Real a_delta(Real xi, Real delta) {
  require_delta(delta);
  if (xi == 0) return 0;
  const Real u = delta * xi;
  if (std::abs(u) < 1e-3) {
    return delta * xi * xi * (1 + u * (-2.0 / 3 + u * (1.0 / 3 + u * (-2.0 / 15 + u * (2.0 / 45)))));
  }
  return xi + std::expm1(-2 * u) / (2 * delta);
}

Real phase(const DispersionSymbol& symbol, Real xi) {
  switch (symbol.kind) {
    case SymbolKind::KdV:
      return xi * xi * xi;
    case SymbolKind::ScaledILW:
      if (!(symbol.delta > 0)) throw ConfigError("phase: scaled ILW requires delta");
      return xi * lambda_delta(xi, symbol.delta);
    case SymbolKind::ILW:
      if (!(symbol.delta > 0)) throw ConfigError("phase: ILW requires delta");
      return (symbol.delta / 3) * xi * lambda_delta(xi, symbol.delta);
    case SymbolKind::BO:
      return xi * std::abs(xi);
  }
  return 0;
}

namespace {
void require_plane(Real xi, Real xi1, Real xi2) {
  const Real scale = std::max({Real(1), std::abs(xi), std::abs(xi1), std::abs(xi2)});
  if (std::abs(xi - (xi1 + xi2)) > 1e-9 * scale) {
    throw std::domain_error("resonance: xi != xi1 + xi2");
  }
}
}  // namespace

Real resonance(const DispersionSymbol& symbol, Real xi, Real xi1, Real xi2) {
  require_plane(xi, xi1, xi2);
  return -phase(symbol, xi) + phase(symbol, xi1) + phase(symbol, xi2);
}

Real resonance_diff_scaled(Real delta, Real xi, Real xi1, Real xi2) {
  require_plane(xi, xi1, xi2);
  require_delta(delta);
  const auto cube_h = [delta](Real y) { return y * y * y * h_delta(y, delta); };
  return cube_h(xi) - cube_h(xi1) - cube_h(xi2);
}

Complex phi_delta(Real t, Real xi, Real xi1, Real xi2, Real delta) {
  const Real diff = resonance_diff_scaled(delta, xi, xi1, xi2);
  const Real xik = resonance(DispersionSymbol::kdv(), xi, xi1, xi2);
  // e^{it Xi_K} (e^{it diff} - 1), with the bracket in cancellation-free form
  const Real half = 0.5 * t * diff;
  const Complex bracket(-2 * std::sin(half) * std::sin(half), std::sin(t * diff));
  return Complex(std::cos(t * xik), std::sin(t * xik)) * bracket;
}

MultiplierTable build_multiplier_table(const Grid& grid, const DispersionSymbol& symbol) {
  MultiplierTable table{grid, symbol, VectorXd::Zero(grid.modes)};
  for (int xi = -grid.band(); xi <= grid.band(); ++xi) {
    table.omega[xi >= 0 ? xi : xi + grid.modes] = phase(symbol, Real(xi));
  }
  return table;
}

}  // namespace ilw
