#pragma once

#include <optional>
#include <string>

#include "spinbus/gates.hpp"
#include "spinbus/model.hpp"
#include "spinbus/propagation.hpp"

namespace spinbus {

// Sweep triple parsed from a "start,stop,count" string.
struct SweepSpec {
  double start = 0;
  double stop = 0;
  int count = 0;
};

struct ExperimentConfig {
  int n_dots = 2;
  std::optional<double> omega1;  // give omega1+omega3 to solve for g,
  double omega2 = 0;             // or give g to solve for omega1*omega3
  std::optional<double> omega3;
  std::optional<double> g;
  double delta1 = 0;
  double delta2 = 0;
  int photon_cutoff = 9;
  int k = 5;
  std::optional<LabFrequencies> lab;

  ModelLevel model_level = ModelLevel::effective_numeric;
  FidelityMode fidelity_mode = FidelityMode::local_z;
  int steps_per_period = 2000;
  int step_count = 0;
  double norm_tolerance = 1e-9;
  double convergence_tol = 1e-8;      // cutoff-convergence guard
  double approximation_threshold = 0.2;

  std::optional<int> cavity_n;        // Fock input (default 0)
  std::optional<double> mean_photon;  // thermal input when set
  std::optional<SweepSpec> photon_range;      // integers, step 1
  std::optional<SweepSpec> kappa_ladder;      // geometric, meV
  std::optional<SweepSpec> separation_ladder; // geometric, meV

  std::string raw;  // original document, echoed into the manifest
};

// Strict flat-JSON schema; problems are aggregated into one ConfigError.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

ModelLevel parse_model_level(const std::string& name);
FidelityMode parse_fidelity_mode(const std::string& name);
const char* model_level_name(ModelLevel level);
const char* fidelity_mode_name(FidelityMode mode);

// Solves the gate schedule implied by the config (g given -> laser product
// solved; omegas given -> g solved) and attaches lab frequencies if present.
GateSchedule schedule_from_config(const ExperimentConfig& cfg);
PropagationConfig propagation_from_config(const ExperimentConfig& cfg);

}  // namespace spinbus
