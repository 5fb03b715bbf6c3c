#pragma once

// Complete-integrability probes for ILW: the resolvent weight
// F(xi; kappa, delta), the Hilbert-Schmidt sandwich operator
// sqrt(R) u sqrt(R) on the truncated frequency lattice, the perturbation
// determinant alpha(kappa; u), and the weighted equicontinuity
// functionals.
//
// The truncated sandwich matrix is the primary object: its lattice
// window is the field's own cutoff by default, and hs_norm_sq is its
// exact spectral-sum counterpart (the two agree to round-off; that
// identity pins the 2pi normalization).  The standalone f_weight
// approximates the full-lattice weight with an analytic digamma tail.

#include <vector>

#include <Eigen/Dense>

#include "ilw/evolve.hpp"
#include "ilw/spectral.hpp"

namespace ilw {

/// Requested accuracy cannot be met at this truncation.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The (AL8)-style smallness gate failed; carries the measured HS norm.
class GateError : public std::runtime_error {
 public:
  GateError(const std::string& what, Real measured) : std::runtime_error(what), measured_(measured) {}
  Real measured() const { return measured_; }

 private:
  Real measured_ = 0;
};

/// Eigenvalue of the sandwich operator reached 1: log-determinant diverges.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr Real kSmallnessGate = 1.0 / 36.0;

struct FWeight {
  Real value = 0;       // (2pi)^{-1} sum over the eta lattice, tail-completed
  Real tail_bound = 0;  // bound on what the tail completion could not resolve
};

/// Resolvent weight F(xi; kappa, delta) over the full integer lattice:
/// explicit summation out to max(cut, the scale where the exponential part
/// of a_delta dies), then a closed-form digamma tail.  Requires
/// cut >= 4 max(|xi|, kappa, 1/delta); throws PrecisionError when the
/// unresolved remainder exceeds 1e-8 of the sum.
FWeight f_weight(Real xi, Real kappa, Real delta, long cut);

/// Hermitian matrix A(xi, eta) = r(xi)^{1/2} u^(xi - eta) r(eta)^{1/2} / sqrt(2pi)
/// on the window |xi|, |eta| <= cut, r = 1/(a_delta + kappa).
/// cut < 0 selects the field's own cutoff M/2.
Eigen::MatrixXcd sandwich_matrix(const SpectralField& u, Real kappa, Real delta, int cut = -1);

/// Squared Hilbert-Schmidt norm of the sandwich operator, computed as the
/// weighted spectral sum over the same lattice window (no matrix built).
Real hs_norm_sq(const SpectralField& u, Real kappa, Real delta, int cut = -1);

/// log-perturbation-determinant alpha = sum_i [-log(1 - lambda_i) - lambda_i]
/// over eigenvalues of the sandwich matrix.  Preconditions: the smallness
/// gate hs_norm_sq < 1/36 (GateError otherwise) and spectral radius < 1
/// (DivergenceError otherwise).
Real alpha(const SpectralField& u, Real kappa, Real delta, int cut = -1);

/// alpha(kappa; u(t_k)) - alpha(kappa; u(0)) along an ILW trajectory.
/// Snapshots violating the gate are flagged (index recorded, NaN entry)
/// and the computation continues.
std::vector<Real> alpha_drift(const Trajectory& traj, Real kappa, std::vector<int>* flagged = nullptr);

/// ||P_{>N} u||_{L^2}.
Real tail_norm(const SpectralField& u, Real n);

/// Weighted-functional parameters: -1/2 < s < 0, mu > 0, tail cutoff N.
struct EquicontinuityProbe {
  Real s = -0.25;
  Real mu = 1;
  Real n = 1;

  EquicontinuityProbe(Real s_, Real mu_, Real n_) : s(s_), mu(mu_), n(n_) {
    if (!(s > -0.5 && s < 0)) throw ConfigError("EquicontinuityProbe: need -1/2 < s < 0");
    if (!(mu > 0) || !(n > 0)) throw ConfigError("EquicontinuityProbe: mu and N must be positive");
  }
};

/// sum_xi |xi|^{2|s|} / (mu^{2|s|} + |xi|^{2|s|}) |u^(xi)|^2.
Real weighted_functional(const SpectralField& u, const EquicontinuityProbe& probe);

/// A_delta(t_k) along a scaled-ILW trajectory, in scaled variables:
/// sum_xi mu^{2|s|}/(mu^{2|s|} + |xi|^{2|s|}) (|v^(t,xi)|^2 - |v^(0,xi)|^2).
std::vector<Real> drift_functional(const Trajectory& traj, const EquicontinuityProbe& probe);

/// Right side of the comparability estimate for F (shape only, no constant).
Real f_weight_envelope(Real xi, Real kappa, Real delta);

}  // namespace ilw
