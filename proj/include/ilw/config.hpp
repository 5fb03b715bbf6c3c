#pragma once

// Declarative experiment configuration.  A single JSON document; unknown
// keys are rejected everywhere for typo safety.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilw/integrable.hpp"
#include "ilw/normalform.hpp"
#include "ilw/spectral.hpp"

namespace ilw {

enum class Experiment { ConvergeShallow, TailTrack, AlphaConserve, NfVerify, SymbolTable };

const char* experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct InitialData {
  std::string name = "cos";  // cos | soliton | random
  Real amplitude = 1;
  int band = 8;  // random profile support
};

struct ProbeConfig {
  Real s = -0.25;
  Real mu = 4;
  Real n = 16;
};

struct NfConfig {
  Real k_threshold = 1;
  Real delta = 0.1;
  int lattice_cut = 8;
  int max_gen = 2;
};

struct RunConfig {
  Experiment experiment = Experiment::SymbolTable;
  int modes = 64;
  Real horizon = 0.5;
  Real dt = 1e-3;
  int record_every = 1;
  InitialData initial;
  std::vector<Real> delta_grid;
  std::optional<ProbeConfig> probe;
  std::optional<NfConfig> nf;
  std::optional<Real> kappa;
  Real data_perturb = 0;  // ||v_{0,delta} - v_0|| = data_perturb * delta
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  int threads = 1;

  nlohmann::json to_json() const;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace ilw
