#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "spinbus/model.hpp"
#include "spinbus/space.hpp"

namespace spinbus {

enum class HamiltonianLevel {
  lab,
  interaction,
  effective_raw,
  effective_pm,
  effective_sz,
  single_qubit,
};

// 3 for the lab/interaction models (up, down, valence), 2 otherwise.
int levels_for(HamiltonianLevel level);

// One sideband: contributes e^{+i freq t} op + e^{-i freq t} op^dagger.
struct HarmonicTerm {
  Eigen::MatrixXcd op;
  double freq = 0;
};

// Hamiltonian with harmonic time dependence,
//   H(t) = static_part + sum_k (e^{i f_k t} T_k + h.c.),
// Hermitian at every t by construction.
class HarmonicHamiltonian {
 public:
  HarmonicHamiltonian(SpaceDescriptor space, Eigen::MatrixXcd static_part,
                      std::vector<HarmonicTerm> terms);

  const SpaceDescriptor& space() const { return space_; }
  int dim() const { return static_cast<int>(static_part_.rows()); }
  bool time_independent() const { return terms_.empty(); }
  double fastest_frequency() const;  // max |f_k|, 0 when time-independent

  void value_into(double t, Eigen::MatrixXcd& out) const;
  Operator value_at(double t) const;

  const Eigen::MatrixXcd& static_part() const { return static_part_; }
  const std::vector<HarmonicTerm>& terms() const { return terms_; }

 private:
  SpaceDescriptor space_;
  Eigen::MatrixXcd static_part_;
  std::vector<HarmonicTerm> terms_;
};

struct LabHamiltonian {
  Operator h0;                // static frame Hamiltonian
  HarmonicHamiltonian drive;  // laser and cavity couplings
};

// Lab-frame model; requires the lab frequency block, with every laser and
// cavity frequency consistent with the detunings.
LabHamiltonian build_lab(const ModelParams& params);
std::pair<Operator, Operator> build_lab(const ModelParams& params, double t);

// Rotating-frame model on the 3-level dots: two laser channels plus the
// cavity channel, each oscillating at its detuning.
HarmonicHamiltonian build_interaction(const ModelParams& params);
Operator build_interaction(const ModelParams& params, double t);

// Two-level model after eliminating the valence level (up/down basis):
// (B/2)(s_ud + s_du) + (A/2)(a^dag s_ud e^{-i delta_i t} + h.c.) per dot.
HarmonicHamiltonian build_effective_raw(const ModelParams& params,
                                        const std::vector<int>& driven_dots);
Operator build_effective_raw(const ModelParams& params, double t,
                             const std::vector<int>& driven_dots);

// Same model rotated to the +/- basis: B S_z + A[a^dag e^{-i delta_i t}
// (2S_z + S_- - S_+)/4 + a e^{+i delta_i t} (2S_z - S_- + S_+)/4] per dot.
HarmonicHamiltonian build_effective_pm(const ModelParams& params,
                                       const std::vector<int>& driven_dots);
Operator build_effective_pm(const ModelParams& params, double t,
                            const std::vector<int>& driven_dots);

// Cavity-conditional part alone: (A/2)(a^dag e^{-i delta_i t} + h.c.) S_z
// per dot, in the +/- basis.
HarmonicHamiltonian build_effective_sz(const ModelParams& params,
                                       const std::vector<int>& driven_dots);
Operator build_effective_sz(const ModelParams& params, double t,
                            const std::vector<int>& driven_dots);

// Single-channel Raman drive on one dot: (omega1*omega3/delta2)(s_ud + s_du).
Operator build_single_qubit(const ModelParams& params, int dot_index);

}  // namespace spinbus
