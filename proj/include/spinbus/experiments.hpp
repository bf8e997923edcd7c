#pragma once

#include <string>

#include "spinbus/config.hpp"

namespace spinbus {

struct ExperimentResult {
  int exit_code = 0;
  std::string data_path;      // empty when nothing was written
  std::string manifest_path;  // sidecar <data>.manifest.json
  std::string message;        // one-line human summary
};

// Runs one named experiment (params, truth-table, photon-sweep, compare,
// parallel, decoherence, single-qubit). Data files are deterministic; the
// manifest sidecar carries the config echo, solver results, the
// cutoff-convergence guard and wall-clock timing. Exit codes: 0 success,
// 2 approximation warning under strict, 3 convergence-guard failure,
// 4 output I/O failure; config problems throw ConfigError (exit 1 in the
// CLI), convergence failures throw ConvergenceError (exit 3).
ExperimentResult run_experiment(const std::string& name,
                                const ExperimentConfig& cfg, bool strict,
                                const std::string& out_path,
                                const std::string& format);

}  // namespace spinbus
