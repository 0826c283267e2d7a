#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdlab/types.hpp"

namespace vdlab {

/// One experiment: mode, system size, couplings, initial data, time window.
/// Fields left unset in the file are drawn deterministically from the seed.
struct ExperimentConfig {
    std::string mode = "simulate";  // simulate | project | scatter | invariants | verify | conjectures
    Eigen::Index n = 2;
    std::optional<double> mu;
    std::optional<double> nu;
    std::optional<double> kappa;
    std::optional<Vec> lambda0;
    std::optional<Vec> theta0;
    double t0 = 0.0;
    double t1 = 10.0;
    double out_dt = 0.1;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int trials = 20;
    std::vector<double> etas_re;
    std::vector<double> etas_im;

    /// Every violated constraint, empty when the config is runnable.
    std::vector<std::string> violations() const;
};

/// Reads TOML (flat key = value) or JSON, decided by extension with a
/// content-based fallback.
ExperimentConfig load_config(const std::string& path);

ExperimentConfig parse_toml(const std::string& text);
ExperimentConfig parse_json(const std::string& text);

}  // namespace vdlab
