#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shl/domain.hpp"

namespace shl {

/// Fully resolved experiment description. Parsed from JSON (strict: unknown
/// keys are rejected) with CLI flags layered on top; the resolved form is
/// echoed into the run sidecar so a run can be reproduced from its artifacts.
struct ExperimentConfig {
  std::string experiment; // potential-profile | hardy | eigen | eps-sweep |
                          // heat | blowup-scan | cost-sweep

  // domain ("n", "gauge")
  int n = 3;
  Gauge gauge = Gauge::ball(1.0);

  // potential ("variant", "mu", "N", "eps")
  std::string variant; // default depends on the experiment
  double mu = 0.0;
  double trunc_N = 100.0;
  double eps = 1e-2;

  // grid
  std::size_t grid_M = 4000;
  std::string grading = "geometric"; // or "uniform"
  double grid_q = 0.85;
  double grid_first = 1e-6;
  double grid_last = 1e-6;

  // sweep windows and lists
  std::vector<double> eps_list;
  std::vector<double> N_list;
  double rho = 0.3;
  double delta = 0.3;

  // time stepping
  double T = 1.0;
  double dt = 0.0; // 0: T/1000
  std::string u0 = "ones"; // ones | eigenfunction
  double forcing_value = 0.0; // constant-in-time forcing on the window bump

  // potential-profile
  int samples = 100;

  // hardy ladder (empty: default levels)
  std::vector<std::pair<std::size_t, double>> hardy_levels;

  // solver
  double tol = 1e-10;
  int max_iter = 200;

  // diagnostics
  bool dump_grid = false; // also write <out>/grid.csv (r, psi, mass_weight)

  // common
  std::string out = ".";
  std::int64_t seed = 0;
  int threads = 0;
};

/// Parse a config JSON file. Accepts either a bare config object or a sidecar
/// ({"config": {...}, ...}); throws ConfigError on unknown keys or bad values.
ExperimentConfig load_config(const std::string& path);

/// Parse from a JSON string (used by load_config and the tests).
ExperimentConfig parse_config(const std::string& json_text);

/// Validate the resolved config against its experiment (ranges, required
/// fields, rejection of parameters the experiment does not use).
void validate_config(const ExperimentConfig& c);

/// Resolved config as a JSON string (the sidecar "config" block).
std::string config_to_json(const ExperimentConfig& c);

} // namespace shl
