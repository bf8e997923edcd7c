#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spinbus {

// meV * ps; fixes the conversion between natural time (1/meV) and picoseconds.
inline constexpr double kHbarMevPs = 0.6582119569;

enum class TimeDirection { kNaturalToPs, kPsToNatural };

double convert_time(double value, TimeDirection direction);

// Optional lab-frame frequency block (meV). omega_l1..3 are the three laser
// frequencies, omega_c the cavity frequency.
struct LabFrequencies {
  double omega_up = 0;
  double omega_down = 0;
  double omega_v = 0;
  double omega_c = 0;
  double omega_l1 = 0;
  double omega_l2 = 0;
  double omega_l3 = 0;
};

// All energies in meV. `delta` holds one cavity detuning per dot.
struct ModelParams {
  int n_dots = 2;
  double omega1 = 0;
  double omega2 = 0;
  double omega3 = 0;
  double g = 0;
  double delta1 = 0;
  double delta2 = 0;
  std::vector<double> delta;
  int photon_cutoff = 9;
  std::optional<LabFrequencies> lab;
};

// Throws DomainError listing every violated constraint.
void validate(const ModelParams& params);

struct DerivedCouplings {
  double a_coupling = 0;  // cavity-assisted Raman rate A, meV
  double b_coupling = 0;  // two-laser Raman rate B, meV
};

// A = (g*omega2/2)(1/delta1 + 1/(delta1+delta_i)), B = 2*omega1*omega3/delta2.
DerivedCouplings derive_couplings(const ModelParams& params, int dot_index);

struct ApproximationEntry {
  std::string condition_name;
  double small_value = 0;
  double large_value = 0;
  double ratio = 0;
  bool pass = true;  // warn when ratio > threshold
};

struct ApproximationReport {
  std::vector<ApproximationEntry> entries;
  double threshold = 0.2;
  bool all_pass() const;
};

// One entry per separation-of-scales condition the effective models rely on.
ApproximationReport check_approximations(const ModelParams& params,
                                         double threshold = 0.2);

// Scales delta1, delta2 by lambda while keeping A, B and every delta_i fixed:
// the drive amplitudes pick up sqrt(lambda) and g is re-solved. Used to probe
// how elimination errors shrink as the detuning hierarchy widens.
ModelParams rescale_detunings(const ModelParams& params, double lambda);

}  // namespace spinbus
