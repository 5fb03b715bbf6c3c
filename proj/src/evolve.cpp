#include "ilw/evolve.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace ilw {
namespace {

constexpr Real kBlowUpThreshold = 1e12;

VectorXcd phase_vector(const MultiplierTable& table, Real t) {
  const int m = table.grid.modes;
  VectorXcd ph(m);
  for (int k = 0; k < m; ++k) {
    const Real a = t * table.omega[k];
    ph[k] = Complex(std::cos(a), std::sin(a));
  }
  return ph;
}

bool finite(const SpectralField& f) {
  for (int k = 0; k < f.grid().modes; ++k) {
    const Complex c = f.data()[k];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    if (std::abs(c) > kBlowUpThreshold) return false;
  }
  return true;
}

}  // namespace

SpectralField apply_propagator(const SpectralField& f, Real t, const MultiplierTable& table) {
  SpectralField out = f;
  out.raw().array() *= phase_vector(table, t).array();
  if (f.mean_zero()) out.set_mean_zero();
  return out;
}

SpectralField interaction_rhs(const SpectralField& w, Real t, const MultiplierTable& table,
                              bool nonlinearity) {
  if (!nonlinearity) return SpectralField(w.grid());
  const SpectralField v = apply_propagator(w, t, table);
  const SpectralField g = convolve(v, v);
  SpectralField out(w.grid());
  const int band = w.grid().band();
  for (int xi = -band; xi <= band; ++xi) {
    if (xi == 0) continue;  // d/dx kills the mean exactly
    const Real a = -t * table.at(xi);
    const Complex phase(std::cos(a), std::sin(a));
    out.set_coeff(xi, Complex(0, xi) * phase * g.coeff(xi));
  }
  out.set_mean_zero();
  return out;
}

SpectralField step(const SpectralField& w, Real t, Real dt, const MultiplierTable& table,
                   bool nonlinearity) {
  const SpectralField k1 = interaction_rhs(w, t, table, nonlinearity);
  const SpectralField k2 = interaction_rhs(w + (dt / 2) * k1, t + dt / 2, table, nonlinearity);
  const SpectralField k3 = interaction_rhs(w + (dt / 2) * k2, t + dt / 2, table, nonlinearity);
  const SpectralField k4 = interaction_rhs(w + dt * k3, t + dt, table, nonlinearity);
  SpectralField out = w + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (w.mean_zero()) out.set_mean_zero();
  return out;
}

SpectralField step(const SpectralField& w, Real t, Real dt, const DispersionSymbol& symbol) {
  return step(w, t, dt, build_multiplier_table(w.grid(), symbol));
}

int Trajectory::index_at(Real t) const {
  for (int k = 0; k < snapshots(); ++k) {
    if (std::abs(times[k] - t) <= 1e-9 * std::max(Real(1), std::abs(t))) return k;
  }
  throw std::domain_error("Trajectory: no snapshot at t = " + std::to_string(t));
}

Real Trajectory::snapshot_spacing() const {
  if (snapshots() < 2) throw std::domain_error("Trajectory: need at least two snapshots");
  const Real h = times[1] - times[0];
  for (int k = 2; k < snapshots(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - h) > 1e-9 * std::max(Real(1), h)) {
      throw std::domain_error("Trajectory: non-uniform snapshot spacing");
    }
  }
  return h;
}

SpectralField Trajectory::interaction_state(int k) const {
  const MultiplierTable table = build_multiplier_table(problem.initial.grid(), problem.symbol);
  return apply_propagator(states.at(k), -times.at(k), table);
}

Real Trajectory::max_relative_l2_drift() const {
  if (l2_log.empty()) return 0;
  const Real base = l2_log[0];
  if (base == 0) {
    Real worst = 0;
    for (Real v : l2_log) worst = std::max(worst, std::abs(v));
    return worst;
  }
  Real worst = 0;
  for (Real v : l2_log) worst = std::max(worst, std::abs(v - base) / base);
  return worst;
}

Trajectory solve(const EvolutionProblem& problem) {
  if (!problem.initial.mean_zero()) throw ConfigError("solve: initial data must be mean-zero");
  if (!(problem.dt > 0)) throw ConfigError("solve: dt must be positive");
  if (problem.horizon < 0) throw ConfigError("solve: horizon must be nonnegative");
  if (problem.record_every < 1) throw ConfigError("solve: recordEvery must be positive");
  long nsteps = 0;
  if (problem.horizon > 0) {
    if (problem.dt > problem.horizon * (1 + 1e-12)) throw ConfigError("solve: dt exceeds horizon");
    nsteps = std::lround(problem.horizon / problem.dt);
    if (std::abs(nsteps * problem.dt - problem.horizon) > 1e-9 * std::max(Real(1), problem.horizon)) {
      throw ConfigError("solve: dt must divide the horizon");
    }
  }

  const MultiplierTable table = build_multiplier_table(problem.initial.grid(), problem.symbol);
  Trajectory traj;
  traj.problem = problem;

  bool cfl_warned = false;
  auto record = [&](Real t, const SpectralField& w) {
    const SpectralField v = apply_propagator(w, t, table);
    traj.times.push_back(t);
    traj.l2_log.push_back(l2_norm(v));
    traj.mean_log.push_back(v.coeff(0).real() / kSqrtTwoPi);
    if (!cfl_warned) {
      const Real vmax = inverse(v).cwiseAbs().maxCoeff();
      if (problem.dt * problem.initial.grid().modes * vmax >= 0.5) {
        traj.warnings.push_back("nonlinear CFL guard: dt * M * max|v| >= 0.5 at t = " + std::to_string(t));
        cfl_warned = true;
      }
    }
    traj.states.push_back(std::move(v));
  };

  SpectralField w = problem.initial;
  record(0, w);
  for (long k = 0; k < nsteps; ++k) {
    const Real t = Real(k) * problem.dt;
    w = step(w, t, problem.dt, table, problem.nonlinearity);
    const Real tnext = Real(k + 1) * problem.dt;
    if (!finite(w)) throw BlowUpError(tnext, std::move(traj));
    if ((k + 1) % problem.record_every == 0 || k + 1 == nsteps) record(tnext, w);
  }
  return traj;
}

Real measured_order(const DispersionSymbol& symbol, const SpectralField& initial, Real horizon,
                    Real dt0) {
  auto final_state = [&](Real dt) {
    EvolutionProblem p{symbol, initial, horizon, dt, std::numeric_limits<int>::max(), true};
    return solve(p).states.back();
  };
  const SpectralField s1 = final_state(dt0);
  const SpectralField s2 = final_state(dt0 / 2);
  const SpectralField s4 = final_state(dt0 / 4);
  const Real e1 = l2_norm(s1 - s2);
  const Real e2 = l2_norm(s2 - s4);
  if (e2 == 0) throw std::domain_error("measured_order: refinement differences vanished");
  return std::log2(e1 / e2);
}

void save_trajectory(const std::string& dir, const Trajectory& traj) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json j;
  j["symbol"] = traj.problem.symbol.name();
  j["delta"] = traj.problem.symbol.delta;
  j["modes"] = traj.problem.initial.grid().modes;
  j["horizon"] = traj.problem.horizon;
  j["dt"] = traj.problem.dt;
  j["recordEvery"] = traj.problem.record_every;
  j["times"] = traj.times;
  j["l2"] = traj.l2_log;
  j["mean"] = traj.mean_log;
  j["warnings"] = traj.warnings;
  std::ofstream(fs::path(dir) / "traj.json") << j.dump(2) << "\n";
  for (int k = 0; k < traj.snapshots(); ++k) {
    char name[40];
    std::snprintf(name, sizeof name, "snapshot_%06d.field", k);
    std::ofstream(fs::path(dir) / name) << to_record(traj.states[k]);
  }
}

Trajectory load_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream meta(fs::path(dir) / "traj.json");
  if (!meta) throw ConfigError("load_trajectory: missing traj.json in " + dir);
  nlohmann::json j;
  meta >> j;
  Trajectory traj;
  const std::string name = j.at("symbol");
  const Real delta = j.at("delta");
  if (name == "kdv") traj.problem.symbol = DispersionSymbol::kdv();
  else if (name == "scaled-ilw") traj.problem.symbol = DispersionSymbol::scaled_ilw(delta);
  else if (name == "ilw") traj.problem.symbol = DispersionSymbol::ilw(delta);
  else if (name == "bo") traj.problem.symbol = DispersionSymbol::bo();
  else throw ConfigError("load_trajectory: unknown symbol " + name);
  traj.problem.horizon = j.at("horizon");
  traj.problem.dt = j.at("dt");
  traj.problem.record_every = j.at("recordEvery");
  traj.times = j.at("times").get<std::vector<Real>>();
  traj.l2_log = j.at("l2").get<std::vector<Real>>();
  traj.mean_log = j.at("mean").get<std::vector<Real>>();
  traj.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (size_t k = 0; k < traj.times.size(); ++k) {
    char name_buf[40];
    std::snprintf(name_buf, sizeof name_buf, "snapshot_%06zu.field", k);
    std::ifstream rec(fs::path(dir) / name_buf);
    if (!rec) throw ConfigError("load_trajectory: missing snapshot record");
    std::string body((std::istreambuf_iterator<char>(rec)), std::istreambuf_iterator<char>());
    traj.states.push_back(from_record(body));
  }
  if (!traj.states.empty()) traj.problem.initial = traj.states.front();
  return traj;
}

}  // namespace ilw
