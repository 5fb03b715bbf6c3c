#include "ilw/config.hpp"

#include <fstream>
#include <set>

namespace ilw {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::ConvergeShallow: return "converge-shallow";
    case Experiment::TailTrack: return "tail-track";
    case Experiment::AlphaConserve: return "alpha-conserve";
    case Experiment::NfVerify: return "nf-verify";
    case Experiment::SymbolTable: return "symbol-table";
  }
  return "?";
}

Experiment experiment_from_name(const std::string& name) {
  for (Experiment e : {Experiment::ConvergeShallow, Experiment::TailTrack, Experiment::AlphaConserve,
                       Experiment::NfVerify, Experiment::SymbolTable}) {
    if (name == experiment_name(e)) return e;
  }
  throw ConfigError("config: unknown experiment '" + name + "'");
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["experiment"] = experiment_name(experiment);
  j["grid"] = {{"modes", modes}};
  j["horizon"] = horizon;
  j["dt"] = dt;
  j["recordEvery"] = record_every;
  j["initialData"] = {{"name", initial.name}, {"amplitude", initial.amplitude}, {"band", initial.band}};
  j["deltaGrid"] = delta_grid;
  if (probe) j["probe"] = {{"s", probe->s}, {"mu", probe->mu}, {"N", probe->n}};
  if (nf) {
    j["nf"] = {{"K", nf->k_threshold}, {"delta", nf->delta}, {"latticeCut", nf->lattice_cut},
               {"maxGen", nf->max_gen}};
  }
  if (kappa) j["kappa"] = *kappa;
  j["dataPerturb"] = data_perturb;
  j["seed"] = seed;
  j["outputDir"] = output_dir;
  j["threads"] = threads;
  return j;
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, {"experiment", "grid", "horizon", "dt", "recordEvery", "initialData",
                       "deltaGrid", "probe", "nf", "kappa", "dataPerturb", "seed", "outputDir",
                       "threads"},
                 "top level");
  RunConfig cfg;
  if (!doc.contains("experiment")) throw ConfigError("config: missing 'experiment'");
  cfg.experiment = experiment_from_name(doc.at("experiment").get<std::string>());

  if (doc.contains("grid")) {
    reject_unknown(doc.at("grid"), {"modes"}, "grid");
    cfg.modes = get_or(doc.at("grid"), "modes", cfg.modes);
  }
  if (cfg.modes < 8 || cfg.modes % 2 != 0) throw ConfigError("config: grid.modes must be even and >= 8");

  cfg.horizon = get_or(doc, "horizon", cfg.horizon);
  cfg.dt = get_or(doc, "dt", cfg.dt);
  cfg.record_every = get_or(doc, "recordEvery", cfg.record_every);
  if (!(cfg.horizon >= 0)) throw ConfigError("config: horizon must be nonnegative");
  if (!(cfg.dt > 0)) throw ConfigError("config: dt must be positive");
  if (cfg.record_every < 1) throw ConfigError("config: recordEvery must be positive");

  if (doc.contains("initialData")) {
    const json& init = doc.at("initialData");
    reject_unknown(init, {"name", "amplitude", "band"}, "initialData");
    cfg.initial.name = get_or<std::string>(init, "name", cfg.initial.name);
    cfg.initial.amplitude = get_or(init, "amplitude", cfg.initial.amplitude);
    cfg.initial.band = get_or(init, "band", cfg.initial.band);
  }

  if (doc.contains("deltaGrid")) {
    cfg.delta_grid = doc.at("deltaGrid").get<std::vector<Real>>();
    for (size_t i = 0; i < cfg.delta_grid.size(); ++i) {
      if (!(cfg.delta_grid[i] > 0)) throw ConfigError("config: deltaGrid entries must be positive");
      if (i > 0 && !(cfg.delta_grid[i] < cfg.delta_grid[i - 1])) {
        throw ConfigError("config: deltaGrid must be strictly decreasing");
      }
    }
  }

  if (doc.contains("probe")) {
    const json& probe = doc.at("probe");
    reject_unknown(probe, {"s", "mu", "N"}, "probe");
    ProbeConfig p;
    p.s = get_or(probe, "s", p.s);
    p.mu = get_or(probe, "mu", p.mu);
    p.n = get_or(probe, "N", p.n);
    if (!(p.s > -0.5 && p.s < 0)) throw ConfigError("config: probe.s must lie in (-1/2, 0)");
    if (!(p.mu > 0) || !(p.n > 0)) throw ConfigError("config: probe.mu and probe.N must be positive");
    cfg.probe = p;
  }

  if (doc.contains("nf")) {
    const json& nf = doc.at("nf");
    reject_unknown(nf, {"K", "delta", "latticeCut", "maxGen"}, "nf");
    NfConfig n;
    n.k_threshold = get_or(nf, "K", n.k_threshold);
    n.delta = get_or(nf, "delta", n.delta);
    n.lattice_cut = get_or(nf, "latticeCut", n.lattice_cut);
    n.max_gen = get_or(nf, "maxGen", n.max_gen);
    if (!(n.k_threshold >= 1)) throw ConfigError("config: nf.K must be >= 1");
    if (!(n.delta > 0)) throw ConfigError("config: nf.delta must be positive");
    if (n.lattice_cut < 1) throw ConfigError("config: nf.latticeCut must be positive");
    if (n.max_gen < 1 || n.max_gen > 4) throw ConfigError("config: nf.maxGen must be in [1, 4]");
    cfg.nf = n;
  }

  if (doc.contains("kappa")) {
    cfg.kappa = doc.at("kappa").get<Real>();
    if (!(*cfg.kappa > 0)) throw ConfigError("config: kappa must be positive");
  }

  cfg.data_perturb = get_or(doc, "dataPerturb", cfg.data_perturb);
  if (cfg.data_perturb < 0) throw ConfigError("config: dataPerturb must be nonnegative");
  cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.output_dir = get_or<std::string>(doc, "outputDir", cfg.output_dir);
  cfg.threads = get_or(doc, "threads", cfg.threads);
  if (cfg.threads < 1) throw ConfigError("config: threads must be positive");

  // per-experiment requirements
  switch (cfg.experiment) {
    case Experiment::ConvergeShallow:
    case Experiment::SymbolTable:
      if (cfg.delta_grid.empty()) throw ConfigError("config: deltaGrid required");
      break;
    case Experiment::TailTrack:
      if (cfg.delta_grid.empty()) throw ConfigError("config: deltaGrid required");
      if (!cfg.probe) throw ConfigError("config: tail-track requires a probe");
      break;
    case Experiment::AlphaConserve:
      if (cfg.delta_grid.empty()) throw ConfigError("config: deltaGrid required");
      if (!cfg.kappa) throw ConfigError("config: alpha-conserve requires kappa");
      break;
    case Experiment::NfVerify:
      if (!cfg.nf) throw ConfigError("config: nf-verify requires nf parameters");
      break;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace ilw
