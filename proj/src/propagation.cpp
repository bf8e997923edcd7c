#include "spinbus/propagation.hpp"

#include <cmath>
#include <sstream>

#include "spinbus/errors.hpp"

namespace spinbus {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Cplx = std::complex<double>;

constexpr Cplx kI{0.0, 1.0};
constexpr double kTwoPi = 6.283185307179586476925286766559;

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

double norm_one(const Mat& m) {
  double best = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    best = std::max(best, m.col(c).cwiseAbs().sum());
  return best;
}

// x <- exp(scale * m) x via a scaled-and-truncated Taylor series; exact for
// any Hermitian or nilpotent m, with substeps keeping each series short.
class ExpApplier {
 public:
  void apply(const Mat& m, Cplx scale, Mat& x) {
    const double weight = std::abs(scale) * norm_one(m);
    const int substeps = std::max(1, static_cast<int>(std::ceil(weight / 0.5)));
    const Cplx sub_scale = scale / static_cast<double>(substeps);
    term_.resizeLike(x);
    prod_.resizeLike(x);
    for (int s = 0; s < substeps; ++s) {
      term_ = x;
      bool converged = false;
      for (int k = 1; k <= 64; ++k) {
        prod_.noalias() = m * term_;
        term_ = (sub_scale / static_cast<double>(k)) * prod_;
        x += term_;
        if (max_abs(term_) <= 1e-16 * std::max(1.0, max_abs(x))) {
          converged = true;
          break;
        }
      }
      if (!converged)
        throw ConvergenceError("matrix exponential series did not converge");
    }
  }

 private:
  Mat term_;
  Mat prod_;
};

int resolve_step_count(const HarmonicHamiltonian& h, double span,
                       const PropagationConfig& config) {
  if (config.step_count > 0) return config.step_count;
  if (config.steps_per_period <= 0)
    throw DomainError("steps_per_period must be positive");
  const double fastest = h.fastest_frequency();
  if (fastest == 0.0) return 1;
  const double periods = span * fastest / kTwoPi;
  return std::max(1, static_cast<int>(std::ceil(periods *
                                                 config.steps_per_period)));
}

void check_span(double t0, double t1) {
  if (t1 < t0) throw DomainError("t1 must not precede t0");
}

}  // namespace

GeomPhaseCoeffs geom_coeffs(double a_coupling, double delta, double t) {
  if (delta == 0.0) throw DomainError("delta must be nonzero");
  const Cplx forward = std::polar(1.0, delta * t) - 1.0;
  const Cplx backward = std::polar(1.0, -delta * t) - 1.0;
  GeomPhaseCoeffs c;
  c.beta = a_coupling / (2.0 * kI * delta) * forward;
  c.gamma = -a_coupling / (2.0 * kI * delta) * backward;
  c.alpha = a_coupling * a_coupling / (4.0 * delta) *
            (t - kI / delta * backward);
  return c;
}

Eigen::MatrixXcd evolve_const(const Operator& h, double t,
                              const Eigen::MatrixXcd& columns) {
  if (!h.verify_hermitian(1e-10))
    throw DomainError("evolve_const requires a Hermitian operator");
  if (columns.rows() != h.entries.rows())
    throw DomainError("state dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.entries);
  Vec phases = (-kI * t * es.eigenvalues().array()).exp().matrix();
  return es.eigenvectors() *
         (phases.asDiagonal() * (es.eigenvectors().adjoint() * columns));
}

StateVector evolve_const(const Operator& h, double t,
                         const StateVector& state) {
  return StateVector{state.space, evolve_const(h, t, Mat(state.amplitudes))};
}

Eigen::MatrixXcd evolve_td(const HarmonicHamiltonian& h, double t0, double t1,
                           const Eigen::MatrixXcd& columns,
                           const PropagationConfig& config) {
  check_span(t0, t1);
  if (columns.rows() != h.dim()) throw DomainError("state dimension mismatch");
  const double span = t1 - t0;
  if (span == 0.0) return columns;
  const int steps = resolve_step_count(h, span, config);
  const double dt = span / steps;

  Eigen::VectorXd initial_norms(columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c)
    initial_norms(c) = columns.col(c).norm();

  Mat x = columns;
  Mat h1(h.dim(), h.dim()), h2(h.dim(), h.dim());
  Mat combo(h.dim(), h.dim());
  ExpApplier applier;

  // Gauss nodes and weights of the 4th-order commutator-free scheme.
  const double root3 = std::sqrt(3.0);
  const double c1 = 0.5 - root3 / 6.0;
  const double c2 = 0.5 + root3 / 6.0;
  const double x1 = (3.0 - 2.0 * root3) / 12.0;
  const double x2 = (3.0 + 2.0 * root3) / 12.0;

  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    switch (config.scheme) {
      case Scheme::midpoint_exponential:
        h.value_into(t + 0.5 * dt, h1);
        applier.apply(h1, -kI * dt, x);
        break;
      case Scheme::commutator_free_4:
        h.value_into(t + c1 * dt, h1);
        h.value_into(t + c2 * dt, h2);
        // The factor acting first must weight the early node more heavily;
        // swapping the two drops the scheme to second order.
        combo = x2 * h1 + x1 * h2;
        applier.apply(combo, -kI * dt, x);
        combo = x1 * h1 + x2 * h2;
        applier.apply(combo, -kI * dt, x);
        break;
    }
  }

  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double drift = std::abs(x.col(c).norm() - initial_norms(c)) /
                         std::max(initial_norms(c), 1e-12);
    if (drift > config.norm_tolerance) {
      std::ostringstream os;
      os << "norm drift " << drift << " exceeds tolerance "
         << config.norm_tolerance;
      throw ConvergenceError(os.str());
    }
  }
  return x;
}

StateVector evolve_td(const HarmonicHamiltonian& h, double t0, double t1,
                      const StateVector& state,
                      const PropagationConfig& config) {
  return StateVector{state.space,
                     evolve_td(h, t0, t1, Mat(state.amplitudes), config)};
}

Operator analytic_evolution(const ModelParams& params,
                            const std::vector<int>& driven_dots, double t,
                            bool include_b_frame) {
  validate(params);
  if (driven_dots.empty()) throw DomainError("no driven dots");
  for (int d : driven_dots)
    if (d < 0 || d >= params.n_dots) throw DomainError("unknown dot");
  const double delta = params.delta[driven_dots.front()];
  for (int d : driven_dots)
    if (params.delta[d] != delta)
      throw DomainError("mismatched detuning across driven dots");

  const DerivedCouplings dc = derive_couplings(params, driven_dots.front());
  const SpaceDescriptor space =
      make_space(params.n_dots, 2, params.photon_cutoff);
  const int dim = space.total_dim();

  Vec j = Vec::Zero(dim);
  for (int d : driven_dots) j += spin_z(space, d).entries.diagonal();

  const GeomPhaseCoeffs coeffs = geom_coeffs(dc.a_coupling, delta, t);
  const Mat a = annihilator(space).entries;

  // Splitting the displacement into normal-ordered ladder series leaks weight
  // past the photon cutoff; exponentiating the combined Hermitian generator
  // keeps the truncated operator exactly unitary.  The imaginary part of
  // alpha is the normal-ordering weight that exponential already carries.
  Mat gen = coeffs.beta * a + coeffs.gamma * a.adjoint();
  gen = j.asDiagonal() * gen;
  Mat u = Mat::Identity(dim, dim);
  ExpApplier applier;
  applier.apply(gen, -kI, u);

  Vec diag_phase(dim);
  for (int i = 0; i < dim; ++i) {
    Cplx phase = -kI * coeffs.alpha.real() * j(i) * j(i);
    if (include_b_frame) phase += -kI * dc.b_coupling * t * j(i);
    diag_phase(i) = std::exp(phase);
  }
  u = diag_phase.asDiagonal() * u;

  Operator result{space, std::move(u)};
  result.is_unitary = result.verify_unitary(1e-9);
  return result;
}

DensityMatrix evolve_lindblad(const HarmonicHamiltonian& h, double kappa,
                              const DensityMatrix& rho, double t0, double t1,
                              const PropagationConfig& config) {
  check_span(t0, t1);
  if (kappa < 0) throw DomainError("kappa must be >= 0");
  if (rho.entries.rows() != h.dim() || rho.entries.cols() != h.dim())
    throw DomainError("density matrix dimension mismatch");
  const double span = t1 - t0;
  if (span == 0.0) return rho;

  int steps = resolve_step_count(h, span, config);
  if (config.step_count == 0)
    steps = std::max(steps, config.steps_per_period);
  const double dt = span / steps;

  const Mat a = annihilator(h.space()).entries;
  const Mat adag = a.adjoint();
  const Vec n_diag = photon_number(h.space()).entries.diagonal();

  const double initial_trace = rho.entries.trace().real();
  Mat r = rho.entries;
  Mat hbuf(h.dim(), h.dim());
  Mat k1(h.dim(), h.dim()), k2(h.dim(), h.dim()), k3(h.dim(), h.dim()),
      k4(h.dim(), h.dim()), stage(h.dim(), h.dim()), tmp(h.dim(), h.dim());

  auto rhs = [&](double t, const Mat& state, Mat& out) {
    h.value_into(t, hbuf);
    out.noalias() = -kI * (hbuf * state);
    out.noalias() += kI * (state * hbuf);
    if (kappa > 0) {
      tmp.noalias() = a * state;
      out.noalias() += kappa * (tmp * adag);
      out.noalias() -= (0.5 * kappa) * (n_diag.asDiagonal() * state);
      out.noalias() -= (0.5 * kappa) * (state * n_diag.asDiagonal());
    }
  };

  const int positivity_stride = std::max(1, steps / 8);
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * dt;
    rhs(t, r, k1);
    stage = r + (0.5 * dt) * k1;
    rhs(t + 0.5 * dt, stage, k2);
    stage = r + (0.5 * dt) * k2;
    rhs(t + 0.5 * dt, stage, k3);
    stage = r + dt * k3;
    rhs(t + dt, stage, k4);
    r += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    r = 0.5 * (r + r.adjoint()).eval();

    if ((s + 1) % positivity_stride == 0 || s + 1 == steps) {
      Eigen::SelfAdjointEigenSolver<Mat> es(r, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-6)
        throw ConvergenceError("density matrix positivity violated");
    }
  }

  const double drift = std::abs(r.trace().real() - initial_trace);
  if (drift > 1e-7) {
    std::ostringstream os;
    os << "trace drift " << drift << " exceeds tolerance 1e-7";
    throw ConvergenceError(os.str());
  }
  return DensityMatrix{rho.space, std::move(r)};
}

}  // namespace spinbus
