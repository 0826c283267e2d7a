#pragma once

#include <string>

#include "vdlab/config.hpp"

namespace vdlab {

/// Executes an experiment, writing artifacts into out_dir.
/// Exit status: 0 success, 2 validation failure (every violated constraint
/// goes to stderr), 3 numerical failure (diagnostic error.json written).
/// Deterministic given (config, seed): identical runs produce byte-identical
/// artifact files.
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace vdlab
