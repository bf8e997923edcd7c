#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace spinbus {

// Composite space of `dot_count` dots with `levels_per_dot` levels each and
// one bosonic mode truncated to photon_dim Fock states. Basis index of the
// configuration (d_1,...,d_N, n) is ((d_1*L + d_2)*L + ...)*photon_dim + n.
// Level encoding: up = 0, down = 1, valence = 2. In the +/- basis used by the
// effective models, + = 0 and - = 1.
struct SpaceDescriptor {
  int dot_count = 0;
  int levels_per_dot = 0;
  int photon_dim = 0;

  int total_dim() const;
  int index(const std::vector<int>& dot_levels, int photon_n) const;
  bool operator==(const SpaceDescriptor&) const = default;
};

SpaceDescriptor make_space(int dot_count, int levels_per_dot,
                           int photon_cutoff);

struct StateVector {
  SpaceDescriptor space;
  Eigen::VectorXcd amplitudes;
};

struct DensityMatrix {
  SpaceDescriptor space;
  Eigen::MatrixXcd entries;
};

struct Operator {
  SpaceDescriptor space;
  Eigen::MatrixXcd entries;
  bool is_hermitian = false;  // advisory; verify on demand
  bool is_unitary = false;    // advisory; verify on demand

  bool verify_hermitian(double tol = 1e-10) const;
  bool verify_unitary(double tol = 1e-9) const;
};

StateVector basis_state(const SpaceDescriptor& space,
                        const std::vector<int>& dot_levels, int photon_n);

// Tensor product of (|up> + sign_i |down>)/sqrt(2) per dot with |photon_n>.
// signs entries are +1 or -1.
StateVector plus_minus_state(const SpaceDescriptor& space,
                             const std::vector<int>& signs, int photon_n);

// p_n proportional to n_bar^n/(1+n_bar)^(n+1), renormalized over the cutoff;
// the dot register is placed in the supplied pure state (length levels^N).
DensityMatrix thermal_density(const SpaceDescriptor& space, double mean_photon,
                              const Eigen::VectorXcd& dot_amplitudes);

std::vector<double> thermal_weights(int photon_dim, double mean_photon);

// |m><n| on the chosen dot, identity elsewhere.
Operator dot_transition_op(const SpaceDescriptor& space, int dot_index, int m,
                           int n);

Operator annihilator(const SpaceDescriptor& space);
Operator photon_number(const SpaceDescriptor& space);

// Spin-1/2 ladder operators in the dot's first two levels:
// spin_z = (|0><0| - |1><1|)/2, spin_plus = |0><1|, spin_minus = |1><0|.
Operator spin_z(const SpaceDescriptor& space, int dot_index);
Operator spin_plus(const SpaceDescriptor& space, int dot_index);
Operator spin_minus(const SpaceDescriptor& space, int dot_index);

// Orthogonal projector onto photon index photon_n with every dot confined to
// computational_levels.
Operator project_sector(const SpaceDescriptor& space, int photon_n,
                        const std::vector<int>& computational_levels = {0, 1});

DensityMatrix partial_trace_cavity(const DensityMatrix& rho);

// Per-dot rotation mapping |0>,|1> to (|0>+|1>)/sqrt(2), (|0>-|1>)/sqrt(2)
// (levels beyond the first two untouched), identity on the cavity factor.
Operator basis_rotation_pm(const SpaceDescriptor& space);

}  // namespace spinbus
