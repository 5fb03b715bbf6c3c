#pragma once

// Time integration of the dispersion family in interaction-representation
// form.  Writing v = S(t) w for the profile variable v and the interaction
// variable w, the flow reduces to
//
//   d/dt w(xi) = i xi e^{-i t omega(xi)} * F[(S(t) w)^2](xi),
//
// which is integrated with classical RK4; the stiff linear part is handled
// exactly by the phase factors.  Quadratic products are dealiased by
// zero-padded physical-space multiplication.

#include <string>
#include <vector>

#include "ilw/spectral.hpp"
#include "ilw/symbols.hpp"

namespace ilw {

struct EvolutionProblem {
  DispersionSymbol symbol;
  SpectralField initial;  // must be mean-zero
  Real horizon = 0;       // T
  Real dt = 0;
  int record_every = 1;
  bool nonlinearity = true;  // test hook: false integrates the free flow
};

/// Recorded flow, stored in profile variables v(t) = S(t) w(t).
struct Trajectory {
  EvolutionProblem problem;
  std::vector<Real> times;
  std::vector<SpectralField> states;
  std::vector<Real> l2_log;
  std::vector<Real> mean_log;
  std::vector<std::string> warnings;

  int snapshots() const { return int(times.size()); }
  /// Index of the snapshot at time t (within jitter tolerance).
  int index_at(Real t) const;
  /// Uniform spacing between recorded snapshots.
  Real snapshot_spacing() const;
  /// Interaction representation S(-t_k) v(t_k) of snapshot k.
  SpectralField interaction_state(int k) const;
  Real max_relative_l2_drift() const;
};

/// Raised when a coefficient exceeds the blow-up threshold (1e12); carries
/// the failure time and whatever trajectory prefix had been recorded.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(Real time, Trajectory partial)
      : std::runtime_error("blow-up detected at t = " + std::to_string(time)),
        time_(time),
        partial_(std::move(partial)) {}
  Real time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  Real time_;
  Trajectory partial_;
};

/// Right-hand side of the interaction-representation ODE at time t.
SpectralField interaction_rhs(const SpectralField& w, Real t, const MultiplierTable& table,
                              bool nonlinearity = true);

/// One RK4 step of the interaction variable from time t to t + dt.
SpectralField step(const SpectralField& w, Real t, Real dt, const MultiplierTable& table,
                   bool nonlinearity = true);
SpectralField step(const SpectralField& w, Real t, Real dt, const DispersionSymbol& symbol);

Trajectory solve(const EvolutionProblem& problem);

/// Apply e^{+i t omega} (profile from interaction) or its inverse.
SpectralField apply_propagator(const SpectralField& f, Real t, const MultiplierTable& table);

/// Empirical RK4 convergence order from a dt, dt/2, dt/4 refinement triple.
Real measured_order(const DispersionSymbol& symbol, const SpectralField& initial, Real horizon,
                    Real dt0);

/// Directory persistence: traj.json plus one field record per snapshot.
void save_trajectory(const std::string& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::string& dir);

}  // namespace ilw
