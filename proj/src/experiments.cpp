#include "ilw/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "ilw/evolve.hpp"
#include "ilw/integrable.hpp"
#include "ilw/normalform.hpp"
#include "ilw/profiles.hpp"
#include "ilw/symbols.hpp"

namespace ilw {
namespace {

using Clock = std::chrono::steady_clock;

Real seconds_since(Clock::time_point t0) {
  return std::chrono::duration<Real>(Clock::now() - t0).count();
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

SpectralField reduced_initial(const RunConfig& cfg, Real* mean_out) {
  const Grid grid(cfg.modes);
  const SpectralField raw = make_profile(grid, cfg.initial.name, cfg.initial.amplitude,
                                         cfg.initial.band, cfg.seed);
  auto [reduced, mean] = galilean_reduce(raw);
  if (mean_out) *mean_out = mean;
  return reduced;
}

// Unit-norm direction used by the optional v_{0,delta} perturbation knob.
SpectralField perturbation_direction(const Grid& grid) {
  SpectralField e(grid);
  const Real c = std::sqrt(2.0) / 2;  // cos(2x)/sqrt(pi) has coefficients sqrt(2)/2
  e.set_coeff(2, Complex(c, 0));
  e.set_coeff(-2, Complex(c, 0));
  e.set_mean_zero();
  return e;
}

Real nan_value() { return std::numeric_limits<Real>::quiet_NaN(); }

}  // namespace

RunManifest run_converge_shallow(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunManifest manifest;
  manifest.experiment = experiment_name(cfg.experiment);
  manifest.config_echo = cfg.to_json();

  Real mean = 0;
  const SpectralField v0 = reduced_initial(cfg, &mean);
  manifest.notes["removedMean"] = mean;
  const Real split_n = cfg.probe ? cfg.probe->n : Real(cfg.modes) / 4;
  manifest.notes["splitN"] = split_n;
  manifest.notes["rateHypothesis"] =
      "h <= delta^2 xi^2 suggests err(delta) = O(delta^2) for smooth data; measured, not asserted";

  const auto t_kdv = Clock::now();
  EvolutionProblem kdv_problem{DispersionSymbol::kdv(), v0, cfg.horizon, cfg.dt, cfg.record_every};
  Trajectory kdv;
  try {
    kdv = solve(kdv_problem);
  } catch (const BlowUpError& e) {
    manifest.status = "partial";
    manifest.warnings.push_back(std::string("kdv solve failed: ") + e.what());
    CsvTable table({"delta", "errSup", "dataDist", "maxDrift"});
    emit_file(cfg.output_dir, "convergence.csv", table.body(), manifest);
    manifest.elapsed_seconds = seconds_since(t0);
    write_manifest(cfg.output_dir, manifest);
    return manifest;
  }
  manifest.timings["kdvSolve"] = seconds_since(t_kdv);
  manifest.drifts["kdv"] = kdv.max_relative_l2_drift();
  for (const auto& w : kdv.warnings) manifest.warnings.push_back("kdv: " + w);

  const MultiplierTable kdv_table = build_multiplier_table(v0.grid(), DispersionSymbol::kdv());

  struct PerDelta {
    bool ok = false;
    std::string error;
    Real err_sup = 0, data_dist = 0, drift = 0;
    std::vector<std::array<Real, 3>> series;  // t, lowDiff, highTail
    std::vector<std::string> warnings;
  };
  const int n = int(cfg.delta_grid.size());
  std::vector<PerDelta> results(n);

  parallel_for(n, cfg.threads, [&](int i) {
    PerDelta& r = results[i];
    const Real delta = cfg.delta_grid[i];
    const DispersionSymbol symbol = DispersionSymbol::scaled_ilw(delta);
    SpectralField v0d = v0;
    if (cfg.data_perturb > 0) v0d += (cfg.data_perturb * delta) * perturbation_direction(v0.grid());
    r.data_dist = l2_norm(v0d - v0);
    try {
      const Trajectory traj = solve({symbol, v0d, cfg.horizon, cfg.dt, cfg.record_every});
      const MultiplierTable table = build_multiplier_table(v0.grid(), symbol);
      Real worst = 0;
      for (int k = 0; k < traj.snapshots(); ++k) {
        const Real t = traj.times[k];
        const SpectralField diff = kdv.states[k] - traj.states[k];
        worst = std::max(worst, l2_norm(diff));
        const SpectralField w_kdv = apply_propagator(kdv.states[k], -t, kdv_table);
        const SpectralField w_d = apply_propagator(traj.states[k], -t, table);
        const Real low = l2_norm(project(w_kdv - w_d, split_n, Band::Low));
        const Real high = l2_norm(project(diff, split_n, Band::High));
        r.series.push_back({t, low, high});
      }
      r.err_sup = worst;
      r.drift = traj.max_relative_l2_drift();
      r.warnings = traj.warnings;
      r.ok = true;
    } catch (const BlowUpError& e) {
      r.error = e.what();
    }
  });

  CsvTable table({"delta", "errSup", "dataDist", "maxDrift"});
  for (int i = 0; i < n; ++i) {
    const PerDelta& r = results[i];
    if (r.ok) {
      table.add_row({cfg.delta_grid[i], r.err_sup, r.data_dist, r.drift});
      manifest.drifts["delta-" + format_real(cfg.delta_grid[i])] = r.drift;
      for (const auto& w : r.warnings) manifest.warnings.push_back("delta " + format_real(cfg.delta_grid[i]) + ": " + w);
    } else {
      table.add_row({cfg.delta_grid[i], nan_value(), r.data_dist, nan_value()});
      manifest.status = "partial";
      manifest.warnings.push_back("delta " + format_real(cfg.delta_grid[i]) + ": " + r.error);
    }
  }
  emit_file(cfg.output_dir, "convergence.csv", table.body(), manifest);

  for (int i = 0; i < n; ++i) {
    if (!results[i].ok) continue;
    CsvTable series({"t", "lowBandDiff", "highTail"});
    for (const auto& row : results[i].series) series.add_row({row[0], row[1], row[2]});
    char name[40];
    std::snprintf(name, sizeof name, "series_%02d.csv", i);
    emit_file(cfg.output_dir, name, series.body(), manifest);
  }

  manifest.elapsed_seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_tail_track(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunManifest manifest;
  manifest.experiment = experiment_name(cfg.experiment);
  manifest.config_echo = cfg.to_json();

  Real mean = 0;
  const SpectralField v0 = reduced_initial(cfg, &mean);
  manifest.notes["removedMean"] = mean;
  const EquicontinuityProbe probe(cfg.probe->s, cfg.probe->mu, cfg.probe->n);

  struct PerDelta {
    bool ok = false;
    std::string error;
    std::vector<std::array<Real, 4>> rows;  // t, tail, W, A
    Real drift = 0;
  };
  const int n = int(cfg.delta_grid.size());
  std::vector<PerDelta> results(n);

  parallel_for(n, cfg.threads, [&](int i) {
    PerDelta& r = results[i];
    try {
      const Trajectory traj =
          solve({DispersionSymbol::scaled_ilw(cfg.delta_grid[i]), v0, cfg.horizon, cfg.dt, cfg.record_every});
      const std::vector<Real> adrift = drift_functional(traj, probe);
      for (int k = 0; k < traj.snapshots(); ++k) {
        r.rows.push_back({traj.times[k], tail_norm(traj.states[k], probe.n),
                          weighted_functional(traj.states[k], probe), adrift[k]});
      }
      r.drift = traj.max_relative_l2_drift();
      r.ok = true;
    } catch (const BlowUpError& e) {
      r.error = e.what();
    }
  });

  CsvTable table({"delta", "t", "tail", "W", "Adelta"});
  for (int i = 0; i < n; ++i) {
    if (!results[i].ok) {
      manifest.status = "partial";
      manifest.warnings.push_back("delta " + format_real(cfg.delta_grid[i]) + ": " + results[i].error);
      continue;
    }
    manifest.drifts["delta-" + format_real(cfg.delta_grid[i])] = results[i].drift;
    for (const auto& row : results[i].rows) {
      table.add_row({cfg.delta_grid[i], row[0], row[1], row[2], row[3]});
    }
  }
  emit_file(cfg.output_dir, "tail_track.csv", table.body(), manifest);
  manifest.elapsed_seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_alpha_conserve(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunManifest manifest;
  manifest.experiment = experiment_name(cfg.experiment);
  manifest.config_echo = cfg.to_json();

  Real mean = 0;
  const SpectralField base = reduced_initial(cfg, &mean);
  manifest.notes["removedMean"] = mean;
  const Real kappa = *cfg.kappa;

  CsvTable table({"delta", "t", "alpha", "drift", "hsNormSq"});
  for (const Real delta : cfg.delta_grid) {
    // scale the amplitude down until the (AL8) gate holds at t = 0
    SpectralField u0 = base;
    int halvings = 0;
    while (!(hs_norm_sq(u0, kappa, delta) < kSmallnessGate)) {
      if (++halvings > 10) {
        throw ConfigError("alpha-conserve: smallness gate unreachable after 10 halvings");
      }
      u0 *= 0.5;
    }
    manifest.notes["amplitudeHalvings-" + format_real(delta)] = halvings;

    try {
      const Trajectory traj = solve({DispersionSymbol::ilw(delta), u0, cfg.horizon, cfg.dt, cfg.record_every});
      manifest.drifts["delta-" + format_real(delta)] = traj.max_relative_l2_drift();
      std::vector<int> flagged;
      const std::vector<Real> drift = alpha_drift(traj, kappa, &flagged);
      for (const int k : flagged) {
        manifest.gate_violations.push_back("delta " + format_real(delta) + ": gate violated at t = " +
                                           format_real(traj.times[k]));
      }
      for (int k = 0; k < traj.snapshots(); ++k) {
        Real a = nan_value(), hs = hs_norm_sq(traj.states[k], kappa, delta);
        if (!std::isnan(drift[k])) a = alpha(traj.states[k], kappa, delta);
        table.add_row({delta, traj.times[k], a, drift[k], hs});
      }
    } catch (const BlowUpError& e) {
      manifest.status = "partial";
      manifest.warnings.push_back("delta " + format_real(delta) + ": " + e.what());
    }
  }
  emit_file(cfg.output_dir, "alpha.csv", table.body(), manifest);
  manifest.elapsed_seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_nf_verify(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunManifest manifest;
  manifest.experiment = experiment_name(cfg.experiment);
  manifest.config_echo = cfg.to_json();

  Real mean = 0;
  const SpectralField v0 = reduced_initial(cfg, &mean);
  manifest.notes["removedMean"] = mean;
  NfParams params;
  params.k_threshold = cfg.nf->k_threshold;
  params.delta = cfg.nf->delta;
  params.lattice_cut = cfg.nf->lattice_cut;
  params.max_gen = cfg.nf->max_gen;

  const Trajectory traj = solve({DispersionSymbol::kdv(), v0, cfg.horizon, cfg.dt, cfg.record_every});
  manifest.drifts["kdv"] = traj.max_relative_l2_drift();

  // (NF3a) residuals on a sampled interior time set
  CsvTable verify_table({"t", "residual"});
  const int samples = std::min(5, std::max(0, traj.snapshots() - 2));
  for (int s = 1; s <= samples; ++s) {
    const int idx = s * (traj.snapshots() - 2) / samples;
    if (idx < 1 || idx + 1 >= traj.snapshots()) continue;
    const Real t = traj.times[idx];
    verify_table.add_row({t, verify_step1(traj, params, t)});
  }
  emit_file(cfg.output_dir, "verify_step1.csv", verify_table.body(), manifest);

  // (NF10) reconstruction residuals for J in {1, 2}
  CsvTable recon_table({"t", "J", "residual"});
  for (int gen = 1; gen <= std::min(2, params.max_gen); ++gen) {
    for (const Real t : {Real(0), traj.times.back()}) {
      try {
        recon_table.add_row({t, Real(gen), reconstruct(traj, gen, params, t)});
      } catch (const CostGuardError& e) {
        manifest.warnings.push_back(std::string("reconstruct skipped: ") + e.what());
      }
    }
  }
  emit_file(cfg.output_dir, "reconstruct.csv", recon_table.body(), manifest);

  // empirical operator sizes
  CsvTable bounds_table({"j", "K", "operator", "ratio", "samples"});
  const int bound_samples = 8;
  for (int j = 1; j <= params.max_gen; ++j) {
    try {
      const BoundsReport report = measure_bounds(j, params, bound_samples, cfg.seed);
      bounds_table.add_row_raw({format_real(Real(j)), format_real(params.k_threshold), "N0",
                                format_real(report.max_n0()), format_real(Real(bound_samples))});
      bounds_table.add_row_raw({format_real(Real(j)), format_real(params.k_threshold), "N1",
                                format_real(report.max_n1()), format_real(Real(bound_samples))});
      bounds_table.add_row_raw({format_real(Real(j)), format_real(params.k_threshold), "N2sup",
                                format_real(report.max_n2()), format_real(Real(bound_samples))});
    } catch (const CostGuardError& e) {
      manifest.warnings.push_back(std::string("measure_bounds skipped: ") + e.what());
    }
  }
  emit_file(cfg.output_dir, "bounds.csv", bounds_table.body(), manifest);

  CsvTable trees_table({"j", "treeCount"});
  long count = 1;
  for (int j = 1; j <= 6; ++j) {
    count *= j;
    trees_table.add_row({Real(j), Real(count)});
  }
  emit_file(cfg.output_dir, "trees.csv", trees_table.body(), manifest);

  manifest.elapsed_seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_symbol_table(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  RunManifest manifest;
  manifest.experiment = experiment_name(cfg.experiment);
  manifest.config_echo = cfg.to_json();

  const int nyq = cfg.modes / 2;
  CsvTable table({"xi", "delta", "lambda", "h", "omegaKdv", "omegaScaledIlw", "omegaIlw", "omegaBo"});
  for (const Real delta : cfg.delta_grid) {
    const DispersionSymbol scaled = DispersionSymbol::scaled_ilw(delta);
    const DispersionSymbol unscaled = DispersionSymbol::ilw(delta);
    for (int xi = 0; xi <= nyq; ++xi) {
      table.add_row({Real(xi), delta, lambda_delta(xi, delta), h_delta(xi, delta),
                     phase(DispersionSymbol::kdv(), xi), phase(scaled, xi), phase(unscaled, xi),
                     phase(DispersionSymbol::bo(), xi)});
    }
  }
  emit_file(cfg.output_dir, "symbols.csv", table.body(), manifest);

  const int res_cut = int(std::min<Real>(cfg.probe ? cfg.probe->n : 32, nyq));
  CsvTable summary({"delta", "maxXiDiff", "maxXiKdv"});
  for (const Real delta : cfg.delta_grid) {
    Real worst = 0, worst_kdv = 0;
    for (int xi1 = -res_cut; xi1 <= res_cut; ++xi1) {
      for (int xi2 = -res_cut; xi2 <= res_cut; ++xi2) {
        const int xi = xi1 + xi2;
        if (xi1 == 0 || xi2 == 0 || xi == 0 || std::abs(xi) > res_cut) continue;
        worst = std::max(worst, std::abs(resonance_diff_scaled(delta, xi, xi1, xi2)));
        worst_kdv = std::max(worst_kdv, std::abs(3.0 * xi * xi1 * xi2));
      }
    }
    summary.add_row({delta, worst, worst_kdv});
  }
  emit_file(cfg.output_dir, "resonance_summary.csv", summary.body(), manifest);

  // measured comparability bracket for F against its asymptotic envelope
  Real ratio_lo = std::numeric_limits<Real>::infinity(), ratio_hi = 0;
  for (const Real delta : cfg.delta_grid) {
    for (const Real kappa : {Real(1), Real(5), Real(20)}) {
      for (int xi = 0; xi <= std::min(nyq, 64); xi += 4) {
        const long cut = std::lround(4 * std::max({std::abs(Real(xi)), kappa, 1 / delta})) + 1;
        const Real f = f_weight(Real(xi), kappa, delta, cut).value;
        const Real ratio = f / f_weight_envelope(Real(xi), kappa, delta);
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
      }
    }
  }
  manifest.notes["al7BracketLow"] = ratio_lo;
  manifest.notes["al7BracketHigh"] = ratio_hi;

  manifest.elapsed_seconds = seconds_since(t0);
  write_manifest(cfg.output_dir, manifest);
  return manifest;
}

RunManifest run_experiment(const RunConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::ConvergeShallow: return run_converge_shallow(cfg);
    case Experiment::TailTrack: return run_tail_track(cfg);
    case Experiment::AlphaConserve: return run_alpha_conserve(cfg);
    case Experiment::NfVerify: return run_nf_verify(cfg);
    case Experiment::SymbolTable: return run_symbol_table(cfg);
  }
  throw ConfigError("run_experiment: unknown experiment");
}

}  // namespace ilw
