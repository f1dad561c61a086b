#pragma once

#include <string>

#include "shl/config.hpp"

namespace shl {

inline constexpr const char* kVersion = "0.1.0";

struct RunOutcome {
  std::string csv_path;
  std::string sidecar_path;
};

/// Validate, run the selected experiment, and write its CSV plus a JSON
/// sidecar (resolved config, version, timing) under cfg.out. Identical
/// config and seed produce byte-identical CSV files.
RunOutcome run_experiment(const ExperimentConfig& cfg);

} // namespace shl
