// lab: pseudospectral ILW/KdV experiment driver.
//
//   lab <experiment> --config <file> [--out <dir>] [--threads <n>]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (partial outputs and manifest are left in the output directory).
// Environment: ILW_LAB_OUT and ILW_LAB_THREADS override the config;
// command-line flags override both.

#include <clocale>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ilw/experiments.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"ILW/KdV shallow-water laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int threads_override = 0;

  for (const auto experiment :
       {ilw::Experiment::ConvergeShallow, ilw::Experiment::TailTrack, ilw::Experiment::AlphaConserve,
        ilw::Experiment::NfVerify, ilw::Experiment::SymbolTable}) {
    auto* sub = app.add_subcommand(ilw::experiment_name(experiment));
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_override, "output directory override");
    sub->add_option("--threads", threads_override, "worker threads for independent delta points");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string chosen = app.get_subcommands().front()->get_name();

  try {
    ilw::RunConfig cfg = ilw::load_config(config_path);
    if (ilw::experiment_name(cfg.experiment) != chosen) {
      throw ilw::ConfigError("config experiment '" + std::string(ilw::experiment_name(cfg.experiment)) +
                             "' does not match subcommand '" + chosen + "'");
    }
    if (const char* env = std::getenv("ILW_LAB_OUT")) cfg.output_dir = env;
    if (const char* env = std::getenv("ILW_LAB_THREADS")) cfg.threads = std::max(1, std::atoi(env));
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (threads_override > 0) cfg.threads = threads_override;

    const ilw::RunManifest manifest = ilw::run_experiment(cfg);
    std::cout << "wrote " << manifest.outputs.size() << " file(s) to " << cfg.output_dir
              << " [status " << manifest.status << "]\n";
    if (manifest.status != "ok") {
      for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
      return 3;
    }
    return 0;
  } catch (const ilw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
