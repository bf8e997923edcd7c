#include "spinbus/space.hpp"

#include <cmath>

#include "spinbus/errors.hpp"

namespace spinbus {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

int checked_pow(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > (1 << 24)) throw DomainError("space dimension overflow");
  }
  return static_cast<int>(r);
}

// op acting on a single dot, identity on all other factors.
Mat embed_dot(const SpaceDescriptor& s, int dot_index, const Mat& op) {
  const int left = checked_pow(s.levels_per_dot, dot_index);
  const int right = checked_pow(s.levels_per_dot, s.dot_count - dot_index - 1) *
                    s.photon_dim;
  const int l = s.levels_per_dot;
  Mat out = Mat::Zero(s.total_dim(), s.total_dim());
  for (int a = 0; a < left; ++a)
    for (int m = 0; m < l; ++m)
      for (int n = 0; n < l; ++n) {
        const std::complex<double> v = op(m, n);
        if (v == std::complex<double>(0, 0)) continue;
        for (int b = 0; b < right; ++b)
          out((a * l + m) * right + b, (a * l + n) * right + b) = v;
      }
  return out;
}

void check_dot_index(const SpaceDescriptor& s, int dot_index) {
  if (dot_index < 0 || dot_index >= s.dot_count)
    throw DomainError("dot index out of range");
}

}  // namespace

int SpaceDescriptor::total_dim() const {
  return checked_pow(levels_per_dot, dot_count) * photon_dim;
}

int SpaceDescriptor::index(const std::vector<int>& dot_levels,
                           int photon_n) const {
  if (static_cast<int>(dot_levels.size()) != dot_count)
    throw DomainError("level list length does not match dot count");
  if (photon_n < 0 || photon_n >= photon_dim)
    throw DomainError("photon index out of range");
  int idx = 0;
  for (int d : dot_levels) {
    if (d < 0 || d >= levels_per_dot) throw DomainError("level out of range");
    idx = idx * levels_per_dot + d;
  }
  return idx * photon_dim + photon_n;
}

SpaceDescriptor make_space(int dot_count, int levels_per_dot,
                           int photon_cutoff) {
  if (dot_count < 1) throw DomainError("dot_count must be >= 1");
  if (levels_per_dot != 2 && levels_per_dot != 3)
    throw DomainError("levels_per_dot must be 2 or 3");
  if (photon_cutoff < 2) throw DomainError("photon_cutoff must be >= 2");
  return SpaceDescriptor{dot_count, levels_per_dot, photon_cutoff + 1};
}

bool Operator::verify_hermitian(double tol) const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::verify_unitary(double tol) const {
  Mat defect = entries.adjoint() * entries;
  defect -= Mat::Identity(entries.rows(), entries.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

StateVector basis_state(const SpaceDescriptor& space,
                        const std::vector<int>& dot_levels, int photon_n) {
  StateVector psi{space, Vec::Zero(space.total_dim())};
  psi.amplitudes(space.index(dot_levels, photon_n)) = 1.0;
  return psi;
}

StateVector plus_minus_state(const SpaceDescriptor& space,
                             const std::vector<int>& signs, int photon_n) {
  if (static_cast<int>(signs.size()) != space.dot_count)
    throw DomainError("sign list length does not match dot count");
  StateVector psi{space, Vec::Zero(space.total_dim())};
  const int n_configs = 1 << space.dot_count;
  const double amp = std::pow(0.5, 0.5 * space.dot_count);
  std::vector<int> levels(space.dot_count);
  for (int mask = 0; mask < n_configs; ++mask) {
    double sign = 1.0;
    for (int d = 0; d < space.dot_count; ++d) {
      const int bit = (mask >> (space.dot_count - 1 - d)) & 1;
      levels[d] = bit;
      if (bit == 1) {
        if (signs[d] != 1 && signs[d] != -1)
          throw DomainError("signs must be +1 or -1");
        sign *= signs[d];
      }
    }
    psi.amplitudes(space.index(levels, photon_n)) = sign * amp;
  }
  return psi;
}

std::vector<double> thermal_weights(int photon_dim, double mean_photon) {
  if (mean_photon < 0) throw DomainError("mean photon number must be >= 0");
  std::vector<double> p(photon_dim);
  double total = 0;
  for (int n = 0; n < photon_dim; ++n) {
    p[n] = std::pow(mean_photon, n) / std::pow(1.0 + mean_photon, n + 1);
    total += p[n];
  }
  for (double& v : p) v /= total;
  return p;
}

DensityMatrix thermal_density(const SpaceDescriptor& space, double mean_photon,
                              const Eigen::VectorXcd& dot_amplitudes) {
  const int dot_dim = space.total_dim() / space.photon_dim;
  if (dot_amplitudes.size() != dot_dim)
    throw DomainError("dot state length does not match register dimension");
  const std::vector<double> p = thermal_weights(space.photon_dim, mean_photon);
  DensityMatrix rho{space, Mat::Zero(space.total_dim(), space.total_dim())};
  for (int a = 0; a < dot_dim; ++a)
    for (int b = 0; b < dot_dim; ++b) {
      const std::complex<double> v =
          dot_amplitudes(a) * std::conj(dot_amplitudes(b));
      if (v == std::complex<double>(0, 0)) continue;
      for (int n = 0; n < space.photon_dim; ++n)
        rho.entries(a * space.photon_dim + n, b * space.photon_dim + n) =
            v * p[n];
    }
  return rho;
}

Operator dot_transition_op(const SpaceDescriptor& space, int dot_index, int m,
                           int n) {
  check_dot_index(space, dot_index);
  if (m < 0 || m >= space.levels_per_dot || n < 0 || n >= space.levels_per_dot)
    throw DomainError("level index out of range");
  Mat op = Mat::Zero(space.levels_per_dot, space.levels_per_dot);
  op(m, n) = 1.0;
  Operator result{space, embed_dot(space, dot_index, op)};
  result.is_hermitian = (m == n);
  return result;
}

Operator annihilator(const SpaceDescriptor& space) {
  const int dot_dim = space.total_dim() / space.photon_dim;
  Mat out = Mat::Zero(space.total_dim(), space.total_dim());
  for (int a = 0; a < dot_dim; ++a)
    for (int n = 1; n < space.photon_dim; ++n)
      out(a * space.photon_dim + n - 1, a * space.photon_dim + n) =
          std::sqrt(static_cast<double>(n));
  return Operator{space, std::move(out)};
}

Operator photon_number(const SpaceDescriptor& space) {
  Mat out = Mat::Zero(space.total_dim(), space.total_dim());
  for (int i = 0; i < space.total_dim(); ++i)
    out(i, i) = static_cast<double>(i % space.photon_dim);
  Operator result{space, std::move(out)};
  result.is_hermitian = true;
  return result;
}

Operator spin_z(const SpaceDescriptor& space, int dot_index) {
  check_dot_index(space, dot_index);
  Mat op = Mat::Zero(space.levels_per_dot, space.levels_per_dot);
  op(0, 0) = 0.5;
  op(1, 1) = -0.5;
  Operator result{space, embed_dot(space, dot_index, op)};
  result.is_hermitian = true;
  return result;
}

Operator spin_plus(const SpaceDescriptor& space, int dot_index) {
  return dot_transition_op(space, dot_index, 0, 1);
}

Operator spin_minus(const SpaceDescriptor& space, int dot_index) {
  return dot_transition_op(space, dot_index, 1, 0);
}

Operator project_sector(const SpaceDescriptor& space, int photon_n,
                        const std::vector<int>& computational_levels) {
  if (photon_n < 0 || photon_n >= space.photon_dim)
    throw DomainError("photon index out of range");
  const int dot_dim = space.total_dim() / space.photon_dim;
  Mat out = Mat::Zero(space.total_dim(), space.total_dim());
  for (int a = 0; a < dot_dim; ++a) {
    bool computational = true;
    int rest = a;
    for (int d = space.dot_count - 1; d >= 0; --d) {
      const int level = rest % space.levels_per_dot;
      rest /= space.levels_per_dot;
      bool found = false;
      for (int c : computational_levels)
        if (c == level) found = true;
      if (!found) computational = false;
    }
    if (computational)
      out(a * space.photon_dim + photon_n, a * space.photon_dim + photon_n) =
          1.0;
  }
  Operator result{space, std::move(out)};
  result.is_hermitian = true;
  return result;
}

DensityMatrix partial_trace_cavity(const DensityMatrix& rho) {
  const SpaceDescriptor& s = rho.space;
  if (rho.entries.rows() != s.total_dim() ||
      rho.entries.cols() != s.total_dim())
    throw DomainError("density matrix does not match its space");
  const int dot_dim = s.total_dim() / s.photon_dim;
  SpaceDescriptor reduced{s.dot_count, s.levels_per_dot, 1};
  DensityMatrix out{reduced, Mat::Zero(dot_dim, dot_dim)};
  for (int a = 0; a < dot_dim; ++a)
    for (int b = 0; b < dot_dim; ++b) {
      std::complex<double> sum = 0;
      for (int n = 0; n < s.photon_dim; ++n)
        sum += rho.entries(a * s.photon_dim + n, b * s.photon_dim + n);
      out.entries(a, b) = sum;
    }
  return out;
}

Operator basis_rotation_pm(const SpaceDescriptor& space) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat w = Mat::Identity(space.levels_per_dot, space.levels_per_dot);
  w(0, 0) = r;
  w(0, 1) = r;
  w(1, 0) = r;
  w(1, 1) = -r;
  Mat out = Mat::Identity(space.total_dim(), space.total_dim());
  for (int d = 0; d < space.dot_count; ++d) out = embed_dot(space, d, w) * out;
  Operator result{space, std::move(out)};
  result.is_hermitian = true;
  result.is_unitary = true;
  return result;
}

}  // namespace spinbus
