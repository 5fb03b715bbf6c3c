#pragma once

// Experiment orchestration: each runner solves what its configuration
// asks for, emits CSV data files plus a manifest into cfg.output_dir, and
// reports partial failures through the manifest status.

#include "ilw/config.hpp"
#include "ilw/manifest.hpp"

namespace ilw {

RunManifest run_converge_shallow(const RunConfig& cfg);
RunManifest run_tail_track(const RunConfig& cfg);
RunManifest run_alpha_conserve(const RunConfig& cfg);
RunManifest run_nf_verify(const RunConfig& cfg);
RunManifest run_symbol_table(const RunConfig& cfg);

/// Dispatch on cfg.experiment; always writes manifest.json (status
/// "partial" when a numerical failure was downgraded to a warning).
RunManifest run_experiment(const RunConfig& cfg);

}  // namespace ilw
