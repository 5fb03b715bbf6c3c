#pragma once

// Fourier multipliers and phase functions for the dispersion family
// {KdV, scaled ILW, ILW, BO}.  The linear flow of each member acts on
// coefficients as multiplication by e^{+i t omega(xi)}:
//
//   KdV        omega(xi) = xi^3
//   ScaledILW  omega(xi) = xi * Lambda_delta(xi)
//   ILW        omega(xi) = (delta/3) * xi * Lambda_delta(xi)
//   BO         omega(xi) = xi |xi|
//
// Lambda_delta is normalized so Lambda_delta -> xi^2 as delta -> 0,
// matching the series 6 xi^2 sum_k 1/(k^2 pi^2 + delta^2 xi^2); the
// closed form is 3/delta * (xi coth(delta xi) - 1/delta).

#include <complex>

#include "ilw/spectral.hpp"

namespace ilw {

enum class SymbolKind { KdV, ScaledILW, ILW, BO };

struct DispersionSymbol {
  SymbolKind kind = SymbolKind::KdV;
  Real delta = 0;  // meaningful for ScaledILW / ILW only

  static DispersionSymbol kdv() { return {SymbolKind::KdV, 0}; }
  static DispersionSymbol scaled_ilw(Real d) { return checked({SymbolKind::ScaledILW, d}); }
  static DispersionSymbol ilw(Real d) { return checked({SymbolKind::ILW, d}); }
  static DispersionSymbol bo() { return {SymbolKind::BO, 0}; }

  const char* name() const {
    switch (kind) {
      case SymbolKind::KdV: return "kdv";
      case SymbolKind::ScaledILW: return "scaled-ilw";
      case SymbolKind::ILW: return "ilw";
      case SymbolKind::BO: return "bo";
    }
    return "?";
  }

 private:
  static DispersionSymbol checked(DispersionSymbol s) {
    if (!(s.delta > 0)) throw ConfigError("DispersionSymbol: delta must be positive");
    return s;
  }
};

/// Lambda_delta(xi) >= 0, with Lambda_delta(0) = 0 and Lambda_delta <= xi^2.
Real lambda_delta(Real xi, Real delta);

/// h(delta, xi) = 1 - Lambda_delta(xi)/xi^2 in [0, 1); h(delta, 0) = 0.
Real h_delta(Real xi, Real delta);

/// a_delta(xi) = xi + (1/2delta)(e^{-2 delta xi} - 1) >= 0.
Real a_delta(Real xi, Real delta);

/// Phase omega(xi) of the linear flow e^{i t omega}.
Real phase(const DispersionSymbol& symbol, Real xi);

/// Resonance function Xi = -omega(xi) + omega(xi1) + omega(xi2) on the
/// convolution plane xi = xi1 + xi2 (enforced).
Real resonance(const DispersionSymbol& symbol, Real xi, Real xi1, Real xi2);

/// Xi_delta - Xi_KdV for the scaled ILW, evaluated in the cancellation-free
/// form xi^3 h(delta,xi) - xi1^3 h(delta,xi1) - xi2^3 h(delta,xi2).
Real resonance_diff_scaled(Real delta, Real xi, Real xi1, Real xi2);

/// phi_delta(t, xi, xi1, xi2) = e^{i t Xi_delta} - e^{i t Xi_KdV};
/// |phi_delta| <= min(2, |t| |Xi_delta - Xi_KdV|).
Complex phi_delta(Real t, Real xi, Real xi1, Real xi2, Real delta);

/// Precomputed omega(xi) over a grid, in the field's coefficient layout.
struct MultiplierTable {
  Grid grid;
  DispersionSymbol symbol;
  VectorXd omega;  // slot k holds omega at the frequency stored in slot k

  Real at(int xi) const { return omega[xi >= 0 ? xi : xi + grid.modes]; }
};

MultiplierTable build_multiplier_table(const Grid& grid, const DispersionSymbol& symbol);

}  // namespace ilw
