#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "spinbus/hamiltonians.hpp"
#include "spinbus/model.hpp"
#include "spinbus/space.hpp"

namespace spinbus {

// Loop coefficients of the conditional-displacement evolution:
// beta  = (A/2i*delta)(e^{+i delta t} - 1)
// gamma = -(A/2i*delta)(e^{-i delta t} - 1)
// alpha = (A^2/4 delta)[t - (i/delta)(e^{-i delta t} - 1)]
// At delta*t = 2*pi*m the displacements vanish and alpha is real.
struct GeomPhaseCoeffs {
  std::complex<double> alpha;
  std::complex<double> beta;
  std::complex<double> gamma;
};

GeomPhaseCoeffs geom_coeffs(double a_coupling, double delta, double t);

enum class Scheme { midpoint_exponential, commutator_free_4 };

struct PropagationConfig {
  Scheme scheme = Scheme::commutator_free_4;
  // Steps per period of the fastest harmonic; ignored when step_count > 0.
  int steps_per_period = 2000;
  int step_count = 0;
  double norm_tolerance = 1e-9;
};

// e^{-iHt} applied through a Hermitian eigendecomposition.
StateVector evolve_const(const Operator& h, double t, const StateVector& state);
Eigen::MatrixXcd evolve_const(const Operator& h, double t,
                              const Eigen::MatrixXcd& columns);

// Time-ordered evolution from t0 to t1; column norms are preserved to
// config.norm_tolerance or the run fails.
StateVector evolve_td(const HarmonicHamiltonian& h, double t0, double t1,
                      const StateVector& state, const PropagationConfig& config);
Eigen::MatrixXcd evolve_td(const HarmonicHamiltonian& h, double t0, double t1,
                           const Eigen::MatrixXcd& columns,
                           const PropagationConfig& config);

// Closed-form conditional-displacement evolution operator
//   U(t) = e^{-i Re(alpha) J^2} exp(-i J (beta a + gamma a^dag)),
// J = sum of S_z over the driven dots.  gamma = conj(beta), so the
// displacement generator is Hermitian and the truncated operator is exactly
// unitary; Im(alpha) is the normal-ordering weight that exponential already
// carries. With include_b_frame set, e^{-i B t J} is applied last.
Operator analytic_evolution(const ModelParams& params,
                            const std::vector<int>& driven_dots, double t,
                            bool include_b_frame);

// Fixed-step order-4 integration of
//   d rho/dt = -i[H, rho] + kappa (a rho a^dag - {a^dag a, rho}/2),
// with Hermitization each step, trace drift checked against 1e-7 and
// positivity monitored (min eigenvalue >= -1e-6).
DensityMatrix evolve_lindblad(const HarmonicHamiltonian& h, double kappa,
                              const DensityMatrix& rho, double t0, double t1,
                              const PropagationConfig& config);

}  // namespace spinbus
