#include "spinbus/hamiltonians.hpp"

#include <cmath>
#include <complex>

#include "spinbus/errors.hpp"

namespace spinbus {

namespace {

using Mat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

constexpr int kUp = 0;
constexpr int kDown = 1;
constexpr int kValence = 2;

void check_driven(const ModelParams& p, const std::vector<int>& driven_dots) {
  if (driven_dots.empty()) throw DomainError("no driven dots");
  for (int d : driven_dots)
    if (d < 0 || d >= p.n_dots || d >= static_cast<int>(p.delta.size()))
      throw DomainError("unknown dot");
}

}  // namespace

int levels_for(HamiltonianLevel level) {
  switch (level) {
    case HamiltonianLevel::lab:
    case HamiltonianLevel::interaction:
      return 3;
    default:
      return 2;
  }
}

HarmonicHamiltonian::HarmonicHamiltonian(SpaceDescriptor space,
                                         Eigen::MatrixXcd static_part,
                                         std::vector<HarmonicTerm> terms)
    : space_(space),
      static_part_(std::move(static_part)),
      terms_(std::move(terms)) {
  const int n = static_cast<int>(static_part_.rows());
  if (static_part_.cols() != n)
    throw DomainError("static part must be square");
  if ((static_part_ - static_part_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainError("static part must be Hermitian");
  for (const HarmonicTerm& term : terms_)
    if (term.op.rows() != n || term.op.cols() != n)
      throw DomainError("term dimension mismatch");
}

double HarmonicHamiltonian::fastest_frequency() const {
  double fastest = 0;
  for (const HarmonicTerm& term : terms_)
    fastest = std::max(fastest, std::abs(term.freq));
  return fastest;
}

void HarmonicHamiltonian::value_into(double t, Eigen::MatrixXcd& out) const {
  out = static_part_;
  for (const HarmonicTerm& term : terms_) {
    const Cplx phase = std::polar(1.0, term.freq * t);
    out.noalias() += phase * term.op;
    out.noalias() += std::conj(phase) * term.op.adjoint();
  }
}

Operator HarmonicHamiltonian::value_at(double t) const {
  Operator op{space_, Mat()};
  value_into(t, op.entries);
  op.is_hermitian = true;
  return op;
}

LabHamiltonian build_lab(const ModelParams& p) {
  validate(p);
  if (!p.lab) throw DomainError("missing lab frequencies");
  const LabFrequencies& lf = *p.lab;
  for (double di : p.delta) {
    const bool consistent =
        std::abs(lf.omega_l2 - (lf.omega_up - lf.omega_v - p.delta1)) <= 1e-9 &&
        std::abs(lf.omega_l1 - (lf.omega_up - lf.omega_v - p.delta2)) <= 1e-9 &&
        std::abs(lf.omega_l3 - (lf.omega_down - lf.omega_v - p.delta2)) <=
            1e-9 &&
        std::abs(lf.omega_c - (lf.omega_down - lf.omega_v - p.delta1 - di)) <=
            1e-9;
    if (!consistent)
      throw DomainError("lab frequencies inconsistent with detunings");
  }

  const SpaceDescriptor space = make_space(p.n_dots, 3, p.photon_cutoff);
  const int dim = space.total_dim();

  Mat h0 = Mat::Zero(dim, dim);
  Mat drive_up = Mat::Zero(dim, dim);    // sum_i sigma_up,v
  Mat drive_down = Mat::Zero(dim, dim);  // sum_i sigma_down,v
  for (int d = 0; d < p.n_dots; ++d) {
    h0 += lf.omega_up * dot_transition_op(space, d, kUp, kUp).entries;
    h0 += lf.omega_down * dot_transition_op(space, d, kDown, kDown).entries;
    h0 += lf.omega_v * dot_transition_op(space, d, kValence, kValence).entries;
    drive_up += dot_transition_op(space, d, kUp, kValence).entries;
    drive_down += dot_transition_op(space, d, kDown, kValence).entries;
  }
  h0 += lf.omega_c * photon_number(space).entries;

  const Mat a = annihilator(space).entries;
  Mat cavity_part = p.g * a * drive_down;
  Mat static_part = cavity_part + cavity_part.adjoint();

  std::vector<HarmonicTerm> terms;
  terms.push_back({p.omega1 * drive_up, -lf.omega_l1});
  terms.push_back({p.omega2 * drive_up, -lf.omega_l2});
  terms.push_back({p.omega3 * drive_down, -lf.omega_l3});

  Operator h0_op{space, std::move(h0)};
  h0_op.is_hermitian = true;
  return LabHamiltonian{
      std::move(h0_op),
      HarmonicHamiltonian(space, std::move(static_part), std::move(terms))};
}

std::pair<Operator, Operator> build_lab(const ModelParams& p, double t) {
  LabHamiltonian lab = build_lab(p);
  return {std::move(lab.h0), lab.drive.value_at(t)};
}

HarmonicHamiltonian build_interaction(const ModelParams& p) {
  validate(p);
  const SpaceDescriptor space = make_space(p.n_dots, 3, p.photon_cutoff);
  const int dim = space.total_dim();

  Mat channel1 = Mat::Zero(dim, dim);  // omega2 laser, detuning delta1
  Mat channel2 = Mat::Zero(dim, dim);  // omega1 + omega3 lasers, delta2
  for (int d = 0; d < p.n_dots; ++d) {
    const Mat up_v = dot_transition_op(space, d, kUp, kValence).entries;
    const Mat down_v = dot_transition_op(space, d, kDown, kValence).entries;
    channel1 += p.omega2 * up_v;
    channel2 += p.omega1 * up_v + p.omega3 * down_v;
  }

  std::vector<HarmonicTerm> terms;
  terms.push_back({std::move(channel1), p.delta1});
  terms.push_back({std::move(channel2), p.delta2});

  const Mat a = annihilator(space).entries;
  for (int d = 0; d < p.n_dots; ++d) {
    Mat cavity =
        p.g * a * dot_transition_op(space, d, kDown, kValence).entries;
    terms.push_back({std::move(cavity), p.delta1 + p.delta[d]});
  }

  return HarmonicHamiltonian(space, Mat::Zero(dim, dim), std::move(terms));
}

Operator build_interaction(const ModelParams& p, double t) {
  return build_interaction(p).value_at(t);
}

HarmonicHamiltonian build_effective_raw(const ModelParams& p,
                                        const std::vector<int>& driven_dots) {
  validate(p);
  check_driven(p, driven_dots);
  const SpaceDescriptor space = make_space(p.n_dots, 2, p.photon_cutoff);
  const int dim = space.total_dim();
  const Mat adag = annihilator(space).entries.adjoint();

  Mat static_part = Mat::Zero(dim, dim);
  std::vector<HarmonicTerm> terms;
  for (int d : driven_dots) {
    const DerivedCouplings dc = derive_couplings(p, d);
    const Mat s_ud = dot_transition_op(space, d, kUp, kDown).entries;
    static_part += (0.5 * dc.b_coupling) * (s_ud + s_ud.adjoint());
    terms.push_back({(0.5 * dc.a_coupling) * adag * s_ud, -p.delta[d]});
  }
  return HarmonicHamiltonian(space, std::move(static_part), std::move(terms));
}

Operator build_effective_raw(const ModelParams& p, double t,
                             const std::vector<int>& driven_dots) {
  return build_effective_raw(p, driven_dots).value_at(t);
}

HarmonicHamiltonian build_effective_pm(const ModelParams& p,
                                       const std::vector<int>& driven_dots) {
  validate(p);
  check_driven(p, driven_dots);
  const SpaceDescriptor space = make_space(p.n_dots, 2, p.photon_cutoff);
  const int dim = space.total_dim();
  const Mat adag = annihilator(space).entries.adjoint();

  Mat static_part = Mat::Zero(dim, dim);
  std::vector<HarmonicTerm> terms;
  for (int d : driven_dots) {
    const DerivedCouplings dc = derive_couplings(p, d);
    const Mat sz = spin_z(space, d).entries;
    const Mat sp = spin_plus(space, d).entries;
    const Mat sm = spin_minus(space, d).entries;
    static_part += dc.b_coupling * sz;
    terms.push_back(
        {(0.25 * dc.a_coupling) * adag * (2.0 * sz + sm - sp), -p.delta[d]});
  }
  return HarmonicHamiltonian(space, std::move(static_part), std::move(terms));
}

Operator build_effective_pm(const ModelParams& p, double t,
                            const std::vector<int>& driven_dots) {
  return build_effective_pm(p, driven_dots).value_at(t);
}

HarmonicHamiltonian build_effective_sz(const ModelParams& p,
                                       const std::vector<int>& driven_dots) {
  validate(p);
  check_driven(p, driven_dots);
  const SpaceDescriptor space = make_space(p.n_dots, 2, p.photon_cutoff);
  const int dim = space.total_dim();
  const Mat adag = annihilator(space).entries.adjoint();

  std::vector<HarmonicTerm> terms;
  for (int d : driven_dots) {
    const DerivedCouplings dc = derive_couplings(p, d);
    terms.push_back(
        {(0.5 * dc.a_coupling) * adag * spin_z(space, d).entries, -p.delta[d]});
  }
  return HarmonicHamiltonian(space, Mat::Zero(dim, dim), std::move(terms));
}

Operator build_effective_sz(const ModelParams& p, double t,
                            const std::vector<int>& driven_dots) {
  return build_effective_sz(p, driven_dots).value_at(t);
}

Operator build_single_qubit(const ModelParams& p, int dot_index) {
  validate(p);
  if (dot_index < 0 || dot_index >= p.n_dots) throw DomainError("unknown dot");
  const SpaceDescriptor space = make_space(p.n_dots, 2, p.photon_cutoff);
  const Mat s_ud = dot_transition_op(space, dot_index, kUp, kDown).entries;
  const double coupling = p.omega1 * p.omega3 / p.delta2;
  Operator h{space, coupling * (s_ud + s_ud.adjoint())};
  h.is_hermitian = true;
  return h;
}

}  // namespace spinbus
