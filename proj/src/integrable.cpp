#include "ilw/integrable.hpp"

#include <cmath>
#include <limits>

namespace ilw {
namespace {

// digamma for x > 0 via recurrence + asymptotic series.
Real digamma(Real x) {
  Real acc = 0;
  while (x < 12) {
    acc -= 1 / x;
    x += 1;
  }
  const Real r = 1 / x, r2 = r * r;
  return acc + std::log(x) - r / 2 - r2 * (1.0 / 12 - r2 * (1.0 / 120 - r2 * (1.0 / 252 - r2 / 240)));
}

// trigamma for x > 0.
Real trigamma(Real x) {
  Real acc = 0;
  while (x < 12) {
    acc += 1 / (x * x);
    x += 1;
  }
  const Real r = 1 / x, r2 = r * r;
  return acc + r + r2 / 2 + r * r2 * (1.0 / 6 - r2 * (1.0 / 30 - r2 * (1.0 / 42 - r2 / 30)));
}

// sum_{eta = c+1}^{infty} 1/((eta + p)(eta + q)), valid for c + 1 + min(p,q) > 0.
Real rational_tail(long c, Real p, Real q) {
  if (p == q) return trigamma(Real(c) + 1 + p);
  return (digamma(Real(c) + 1 + q) - digamma(Real(c) + 1 + p)) / (q - p);
}

Real inv_weight(Real eta, Real xi, Real kappa, Real delta) {
  return 1.0 / ((a_delta(eta, delta) + kappa) * (a_delta(xi + eta, delta) + kappa));
}

}  // namespace

FWeight f_weight(Real xi, Real kappa, Real delta, long cut) {
  if (!(kappa > 0) || !(delta > 0)) throw std::domain_error("f_weight: kappa and delta must be positive");
  const Real floor = 4 * std::max({std::abs(xi), kappa, 1 / delta});
  if (Real(cut) < floor) {
    throw ConfigError("f_weight: cut must be at least 4*max(|xi|, kappa, 1/delta)");
  }

  // Positive side: explicit sum until the e^{-2 delta eta} part of a_delta
  // is dead, then the pure-rational tail in closed form.
  const long kMaxTerms = 50'000'000;
  const Real beta = 1 / (2 * delta);
  long hi = std::max<long>(cut, std::lround(std::ceil(22 / delta + std::abs(xi))));
  bool resolved = true;
  if (hi > kMaxTerms) {
    hi = kMaxTerms;
    resolved = false;
  }
  Real sum = 0;
  for (long eta = 0; eta <= hi; ++eta) sum += inv_weight(Real(eta), xi, kappa, delta);

  // Negative side: terms decay like e^{-2 delta |eta|}, sum to convergence.
  for (long eta = -1; eta >= -kMaxTerms; --eta) {
    const Real term = inv_weight(Real(eta), xi, kappa, delta);
    sum += term;
    if (term < 1e-18 * sum && -eta > std::abs(xi) + 2) break;
    if (eta == -kMaxTerms) resolved = false;
  }

  // Tail eta > hi with a_delta(eta) ~ eta - beta: exact digamma form.
  const Real tail = rational_tail(hi, kappa - beta, xi + kappa - beta);
  sum += tail;
  // Unresolved part: the dropped exponential correction on (hi, infty).
  Real bound = std::abs(beta * std::exp(-2 * delta * Real(hi)) / (2 * delta)) /
               std::max(Real(1), (Real(hi) - beta + kappa) * (Real(hi) - beta + kappa));
  if (!resolved) bound += tail + 1;
  FWeight out{sum / kTwoPi, bound / kTwoPi};
  if (out.tail_bound > 1e-8 * std::abs(out.value)) {
    throw PrecisionError("f_weight: cut too small, tail bound exceeds 1e-8 of the partial sum");
  }
  return out;
}

Real f_weight_envelope(Real xi, Real kappa, Real delta) {
  const Real dk = delta * kappa;
  const Real top = std::sqrt((1 + dk) / dk) + std::log(1 + delta * std::abs(xi) / (1 + dk));
  const Real bot = delta * xi * xi / (1 + delta * std::abs(xi)) + kappa;
  return top / bot;
}

namespace {

int window_cut(const SpectralField& u, int cut) {
  if (cut < 0) return u.grid().nyquist();
  if (cut < 1) throw ConfigError("sandwich lattice cut must be positive");
  return cut;
}

VectorXd resolvent_weights(Real kappa, Real delta, int cut) {
  VectorXd r(2 * cut + 1);
  for (int k = -cut; k <= cut; ++k) r[k + cut] = 1.0 / (a_delta(Real(k), delta) + kappa);
  return r;
}

}  // namespace

Eigen::MatrixXcd sandwich_matrix(const SpectralField& u, Real kappa, Real delta, int cut) {
  if (!(kappa > 0) || !(delta > 0)) throw std::domain_error("sandwich_matrix: kappa, delta must be positive");
  const int c = window_cut(u, cut);
  const VectorXd r = resolvent_weights(kappa, delta, c);
  const int n = 2 * c + 1;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    const int xi = i - c;
    for (int j = 0; j < n; ++j) {
      const int eta = j - c;
      a(i, j) = std::sqrt(r[i]) * u.coeff(xi - eta) * std::sqrt(r[j]) / kSqrtTwoPi;
    }
  }
  return a;
}

Real hs_norm_sq(const SpectralField& u, Real kappa, Real delta, int cut) {
  if (!(kappa > 0) || !(delta > 0)) throw std::domain_error("hs_norm_sq: kappa, delta must be positive");
  const int c = window_cut(u, cut);
  const VectorXd r = resolvent_weights(kappa, delta, c);
  Real acc = 0;
  const int band = u.grid().band();
  for (int zeta = -band; zeta <= band; ++zeta) {
    const Real mag2 = std::norm(u.coeff(zeta));
    if (mag2 == 0) continue;
    Real w = 0;
    const int lo = std::max(-c, -c - zeta), hi = std::min(c, c - zeta);
    for (int eta = lo; eta <= hi; ++eta) w += r[eta + c] * r[eta + zeta + c];
    acc += mag2 * w / kTwoPi;
  }
  return acc;
}

Real alpha(const SpectralField& u, Real kappa, Real delta, int cut) {
  const Real hs = hs_norm_sq(u, kappa, delta, cut);
  if (!(hs < kSmallnessGate)) {
    throw GateError("alpha: smallness gate violated, hs_norm_sq = " + std::to_string(hs) +
                        " >= 1/36",
                    hs);
  }
  const Eigen::MatrixXcd a = sandwich_matrix(u, kappa, delta, cut);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  const VectorXd lambda = es.eigenvalues();
  Real acc = 0;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda[i] >= 1) throw DivergenceError("alpha: sandwich eigenvalue >= 1");
    acc += -std::log1p(-lambda[i]) - lambda[i];
  }
  return acc;
}

std::vector<Real> alpha_drift(const Trajectory& traj, Real kappa, std::vector<int>* flagged) {
  if (traj.problem.symbol.kind != SymbolKind::ILW) {
    throw ConfigError("alpha_drift: trajectory must be evolved under the unscaled ILW symbol");
  }
  const Real delta = traj.problem.symbol.delta;
  std::vector<Real> out;
  out.reserve(traj.snapshots());
  Real base = 0;
  for (int k = 0; k < traj.snapshots(); ++k) {
    Real a;
    try {
      a = alpha(traj.states[k], kappa, delta);
    } catch (const GateError&) {
      if (k == 0) throw;  // gate must hold at t = 0
      if (flagged) flagged->push_back(k);
      out.push_back(std::numeric_limits<Real>::quiet_NaN());
      continue;
    }
    if (k == 0) base = a;
    out.push_back(a - base);
  }
  return out;
}

Real tail_norm(const SpectralField& u, Real n) {
  return l2_norm(project(u, n, Band::High));
}

Real weighted_functional(const SpectralField& u, const EquicontinuityProbe& probe) {
  const Real p = 2 * std::abs(probe.s);
  const Real mup = std::pow(probe.mu, p);
  Real acc = 0;
  for (int xi = -u.grid().band(); xi <= u.grid().band(); ++xi) {
    if (xi == 0) continue;
    const Real xip = std::pow(std::abs(Real(xi)), p);
    acc += xip / (mup + xip) * std::norm(u.coeff(xi));
  }
  return acc;
}

std::vector<Real> drift_functional(const Trajectory& traj, const EquicontinuityProbe& probe) {
  if (traj.problem.symbol.kind != SymbolKind::ScaledILW) {
    throw ConfigError("drift_functional: trajectory must be evolved under the scaled ILW symbol");
  }
  const Real p = 2 * std::abs(probe.s);
  const Real mup = std::pow(probe.mu, p);
  const SpectralField& v0 = traj.states.at(0);
  std::vector<Real> out;
  out.reserve(traj.snapshots());
  for (int k = 0; k < traj.snapshots(); ++k) {
    const SpectralField& vt = traj.states[k];
    Real acc = 0;
    for (int xi = -vt.grid().band(); xi <= vt.grid().band(); ++xi) {
      if (xi == 0) continue;
      const Real xip = std::pow(std::abs(Real(xi)), p);
      acc += mup / (mup + xip) * (std::norm(vt.coeff(xi)) - std::norm(v0.coeff(xi)));
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace ilw
