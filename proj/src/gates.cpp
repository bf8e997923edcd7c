#include "spinbus/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spinbus/errors.hpp"
#include "spinbus/hamiltonians.hpp"
#include "spinbus/space.hpp"

namespace spinbus {

namespace {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

const std::array<std::array<int, 2>, 4> kPairConfigs{
    {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

const Eigen::Matrix4cd& two_dot_hadamard() {
  static const Eigen::Matrix4cd w2 = [] {
    Eigen::Matrix2cd w;
    w << 1, 1, 1, -1;
    w /= std::sqrt(2.0);
    Eigen::Matrix4cd out;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d)
            out(2 * a + c, 2 * b + d) = w(a, b) * w(c, d);
    return out;
  }();
  return w2;
}

GateSchedule finish_schedule(ModelParams params, int k,
                             std::optional<double> g_required,
                             std::optional<double> omega_product_required) {
  validate(params);
  GateSchedule s;
  s.k = k;
  s.delta_solved = params.delta.at(0);
  s.g_required = g_required;
  s.omega_product_required = omega_product_required;
  s.t_gate_natural = kTwoPi / s.delta_solved;
  s.t_gate_ps = convert_time(s.t_gate_natural, TimeDirection::kNaturalToPs);
  s.couplings = derive_couplings(params, 0);
  s.params = std::move(params);

  const double t = s.t_gate_natural;
  if (std::abs(s.couplings.a_coupling - s.delta_solved) >
      1e-10 * std::max(1.0, s.delta_solved))
    throw ConvergenceError(
        "schedule self-consistency failed: cavity coupling does not match "
        "the loop detuning");
  const double cond_phase =
      s.couplings.a_coupling * s.couplings.a_coupling / (4 * s.delta_solved) *
      t;
  if (std::abs(cond_phase - kPi / 2) > 1e-9)
    throw ConvergenceError("conditional phase misses pi/2 at loop closure");
  if (std::abs(s.couplings.b_coupling * t - (2 * kPi * k + kPi / 2)) > 1e-9)
    throw ConvergenceError(
        "drive phase misses its gate value at loop closure");
  return s;
}

ModelParams base_params(double omega1, double omega2, double omega3, double g,
                        double delta1, double delta2, double delta, int n_dots,
                        int photon_cutoff) {
  ModelParams p;
  p.n_dots = n_dots;
  p.omega1 = omega1;
  p.omega2 = omega2;
  p.omega3 = omega3;
  p.g = g;
  p.delta1 = delta1;
  p.delta2 = delta2;
  p.delta.assign(static_cast<size_t>(n_dots), delta);
  p.photon_cutoff = photon_cutoff;
  return p;
}

}  // namespace

double solve_delta(double g, double omega2, double delta1) {
  if (!(g > 0) || !(omega2 > 0) || !(delta1 > 0))
    throw DomainError("solve_delta requires positive g, omega2 and delta1");
  const double qa = delta1;
  const double qb = delta1 * delta1 - g * omega2 / 2;
  const double qc = -g * omega2 * delta1;
  const double disc = qb * qb - 4 * qa * qc;
  // qc < 0 guarantees one positive root; pick the cancellation-free branch.
  const double root = qb >= 0 ? -2 * qc / (qb + std::sqrt(disc))
                              : (-qb + std::sqrt(disc)) / (2 * qa);
  if (!(root > 0))
    throw DomainError("no positive detuning solves the closure relation");
  return root;
}

GateSchedule solve_schedule(double omega1, double omega2, double omega3,
                            double delta1, double delta2, int k, int n_dots,
                            int photon_cutoff) {
  if (!(omega1 > 0) || !(omega2 > 0) || !(omega3 > 0) || !(delta1 > 0) ||
      !(delta2 > 0))
    throw DomainError("drive amplitudes and channel detunings must be > 0");
  if (k < 0) throw DomainError("winding number k must be >= 0");

  const double delta_target = 8 * omega1 * omega3 / (delta2 * (4.0 * k + 1.0));
  const double g0 = 2 * delta_target /
                    (omega2 * (1 / delta1 + 1 / (delta1 + delta_target)));
  if (!(g0 >= 1e-9) || !(g0 <= 1e6))
    throw InfeasibleError(
        "required cavity coupling falls outside the feasible range "
        "[1e-9, 1e6]");

  // solve_delta is monotone in g; bracket around the closed-form seed and
  // bisect down to the requested detuning.
  auto mismatch = [&](double g) {
    return solve_delta(g, omega2, delta1) - delta_target;
  };
  double lo = g0 * (1 - 1e-3), hi = g0 * (1 + 1e-3);
  double flo = mismatch(lo), fhi = mismatch(hi);
  for (int i = 0; (flo > 0 || fhi < 0) && i < 120; ++i) {
    if (flo > 0) {
      lo /= 2;
      flo = mismatch(lo);
    }
    if (fhi < 0) {
      hi *= 2;
      fhi = mismatch(hi);
    }
  }
  if (flo > 0 || fhi < 0)
    throw ConvergenceError(
        "failed to bracket the coupling for the requested winding");
  double g = g0;
  for (int i = 0; i < 200; ++i) {
    const double f = mismatch(g);
    if (std::abs(f) <= 1e-12 * delta_target) break;
    (f < 0 ? lo : hi) = g;
    g = (lo + hi) / 2;
    if (hi - lo <= 8 * std::numeric_limits<double>::epsilon() * g) break;
  }

  ModelParams params =
      base_params(omega1, omega2, omega3, g, delta1, delta2,
                  solve_delta(g, omega2, delta1), n_dots, photon_cutoff);
  return finish_schedule(std::move(params), k, g, std::nullopt);
}

GateSchedule solve_schedule_fixed_g(double g, double omega2, double delta1,
                                    double delta2, int k, int n_dots,
                                    int photon_cutoff) {
  if (!(g > 0) || !(omega2 > 0) || !(delta1 > 0) || !(delta2 > 0))
    throw DomainError(
        "coupling, omega2 and channel detunings must be > 0");
  if (k < 0) throw DomainError("winding number k must be >= 0");

  const double delta = solve_delta(g, omega2, delta1);
  const double product = delta * delta2 * (4.0 * k + 1.0) / 8;
  const double omega13 = std::sqrt(product);
  ModelParams params = base_params(omega13, omega2, omega13, g, delta1,
                                   delta2, delta, n_dots, photon_cutoff);
  return finish_schedule(std::move(params), k, std::nullopt, product);
}

Eigen::Matrix4cd ideal_cz_pm() {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  u(0, 0) = -1;
  return u;
}

Eigen::Matrix4cd ideal_cz_updown() {
  const Eigen::Matrix4cd& w2 = two_dot_hadamard();
  return w2 * ideal_cz_pm() * w2;
}

FidelityResult channel_fidelity(const std::vector<Eigen::Matrix4cd>& kraus,
                                const Eigen::Matrix4cd& u_ideal,
                                FidelityMode mode) {
  if (kraus.empty())
    throw DomainError("channel_fidelity needs at least one Kraus block");
  double k_term = 0;
  for (const auto& m : kraus) k_term += m.squaredNorm();

  if (mode != FidelityMode::local_z) {
    double s = 0;
    for (const auto& m : kraus) s += std::norm((u_ideal.adjoint() * m).trace());
    return {(s + k_term) / 20.0, 0, 0};
  }

  // Diagonal phase correction diag(1, e^{i phi2}, e^{i phi1},
  // e^{i(phi1+phi2)}); only the diagonal of M U_ideal^dag enters the trace.
  std::vector<std::array<Cplx, 4>> w;
  w.reserve(kraus.size());
  for (const auto& m : kraus) {
    const Eigen::Vector4cd d = (m * u_ideal.adjoint()).diagonal();
    w.push_back({d(0), d(1), d(2), d(3)});
  }
  auto overlap = [&](double phi1, double phi2) {
    const Cplx e1 = std::polar(1.0, phi1), e2 = std::polar(1.0, phi2);
    double s = 0;
    for (const auto& wk : w)
      s += std::norm(wk[0] + wk[1] * e2 + wk[2] * e1 + wk[3] * e1 * e2);
    return s;
  };

  double phi1 = 0, phi2 = 0, best = overlap(0, 0);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double p1 = -kPi + kTwoPi * i / 64;
      const double p2 = -kPi + kTwoPi * j / 64;
      const double v = overlap(p1, p2);
      if (v > best) {
        best = v;
        phi1 = p1;
        phi2 = p2;
      }
    }
  // Coordinate ascent; each half-step has a closed-form optimum.
  for (int it = 0; it < 128; ++it) {
    const Cplx e1 = std::polar(1.0, phi1);
    Cplx z = 0;
    for (const auto& wk : w)
      z += std::conj(wk[0] + wk[2] * e1) * (wk[1] + wk[3] * e1);
    if (std::abs(z) > 0) phi2 = -std::arg(z);
    const Cplx e2 = std::polar(1.0, phi2);
    z = 0;
    for (const auto& wk : w)
      z += std::conj(wk[0] + wk[1] * e2) * (wk[2] + wk[3] * e2);
    if (std::abs(z) > 0) phi1 = -std::arg(z);
    const double v = overlap(phi1, phi2);
    if (v - best <= 1e-14 * std::max(1.0, best)) {
      best = std::max(best, v);
      break;
    }
    best = v;
  }
  return {(best + k_term) / 20.0, phi1, phi2};
}

FidelityResult gate_fidelity(const Eigen::Matrix4cd& u_real,
                             const Eigen::Matrix4cd& u_ideal,
                             FidelityMode mode) {
  return channel_fidelity({u_real}, u_ideal, mode);
}

Eigen::Matrix4cd pair_sector_block(const SpaceDescriptor& space,
                                   const Eigen::MatrixXcd& u, int photon_out,
                                   int photon_in) {
  if (space.dot_count != 2)
    throw DomainError("pair_sector_block requires a two-dot space");
  Eigen::Matrix4cd b;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      b(r, c) = u(space.index({kPairConfigs[r][0], kPairConfigs[r][1]},
                              photon_out),
                  space.index({kPairConfigs[c][0], kPairConfigs[c][1]},
                              photon_in));
  return b;
}

HarmonicHamiltonian effective_gate_hamiltonian(
    const ModelParams& params, const std::vector<int>& driven_dots) {
  const HarmonicHamiltonian sidebands = build_effective_sz(params, driven_dots);
  const SpaceDescriptor space = make_space(params.n_dots, 2, params.photon_cutoff);
  Mat static_part = Mat::Zero(space.total_dim(), space.total_dim());
  for (int d : driven_dots)
    static_part +=
        derive_couplings(params, d).b_coupling * spin_z(space, d).entries;
  return HarmonicHamiltonian(space, std::move(static_part), sidebands.terms());
}

GateReport run_cz(const GateSchedule& schedule, ModelLevel level,
                  const CavitySpec& cavity, FidelityMode mode,
                  const PropagationConfig& config) {
  const ModelParams& params = schedule.params;
  validate(params);
  if (params.n_dots != 2)
    throw DomainError("run_cz requires a two-dot parameter set");
  const double t = schedule.t_gate_natural;
  const int pd = params.photon_cutoff + 1;
  const std::vector<int> driven{0, 1};

  std::vector<int> sectors;
  std::vector<double> weights;
  if (cavity.kind == CavitySpec::Kind::fock) {
    if (cavity.n < 0 || cavity.n >= pd)
      throw DomainError("initial photon number lies outside the cavity space");
    sectors.push_back(cavity.n);
    weights.push_back(1.0);
  } else {
    if (cavity.n_bar < 0) throw DomainError("mean photon number must be >= 0");
    weights = thermal_weights(pd, cavity.n_bar);
    sectors.resize(static_cast<size_t>(pd));
    std::iota(sectors.begin(), sectors.end(), 0);
  }

  const bool pm_basis = level != ModelLevel::full_numeric;
  const SpaceDescriptor space =
      make_space(2, pm_basis ? 2 : 3, params.photon_cutoff);

  Mat u_full;  // analytic level only
  Mat x;       // evolved computational columns, dim x (4 * sectors)
  {
    Mat x0 = Mat::Zero(space.total_dim(), 4 * static_cast<int>(sectors.size()));
    for (size_t si = 0; si < sectors.size(); ++si)
      for (int c = 0; c < 4; ++c)
        x0(space.index({kPairConfigs[c][0], kPairConfigs[c][1]}, sectors[si]),
           4 * static_cast<int>(si) + c) = 1.0;
    switch (level) {
      case ModelLevel::analytic:
        u_full = analytic_evolution(params, driven, t, true).entries;
        x = u_full * x0;
        break;
      case ModelLevel::effective_numeric:
        x = evolve_td(effective_gate_hamiltonian(params, driven), 0, t, x0,
                      config);
        break;
      case ModelLevel::full_numeric:
        x = evolve_td(build_interaction(params), 0, t, x0, config);
        break;
    }
  }

  std::vector<int> valence_rows;
  if (!pm_basis)
    for (int d0 = 0; d0 < 3; ++d0)
      for (int d1 = 0; d1 < 3; ++d1)
        if (d0 == 2 || d1 == 2)
          for (int n = 0; n < pd; ++n)
            valence_rows.push_back(space.index({d0, d1}, n));

  auto column_block = [&](size_t si, int m) {
    Eigen::Matrix4cd b;
    for (int r = 0; r < 4; ++r) {
      const int row = space.index({kPairConfigs[r][0], kPairConfigs[r][1]}, m);
      for (int c = 0; c < 4; ++c)
        b(r, c) = x(row, 4 * static_cast<int>(si) + c);
    }
    return b;
  };

  const Eigen::Matrix4cd& w2 = two_dot_hadamard();
  const Eigen::Matrix4cd ideal_ud = ideal_cz_updown();

  GateReport report;
  report.model_level = level;
  report.fidelity_mode = mode;
  report.t_gate_ps = schedule.t_gate_ps;

  std::vector<Eigen::Matrix4cd> kraus;  // thermal channel, up/down basis
  std::vector<double> sector_fids;
  double leak_acc = 0, vleak_acc = 0;

  for (size_t si = 0; si < sectors.size(); ++si) {
    const int n0 = sectors[si];
    const Eigen::Matrix4cd self = column_block(si, n0);

    double kept = 0;
    for (int c = 0; c < 4; ++c) kept += self.col(c).squaredNorm();
    const double leak = 1 - kept / 4;
    double vleak = 0;
    if (!pm_basis) {
      for (int c = 0; c < 4; ++c)
        for (int row : valence_rows)
          vleak += std::norm(x(row, 4 * static_cast<int>(si) + c));
      vleak /= 4;
    }
    leak_acc += weights[si] * leak;
    vleak_acc += weights[si] * vleak;

    const Eigen::Matrix4cd m_ud = pm_basis ? (w2 * self * w2).eval() : self;
    const Eigen::Matrix4cd m_pm = pm_basis ? self : (w2 * self * w2).eval();
    if (level != ModelLevel::analytic) {
      report.sector_unitaries[n0] = m_ud;
      if (n0 <= pd - 3)
        sector_fids.push_back(channel_fidelity({m_ud}, ideal_ud, mode).value);
    }
    if (si == 0) {
      const Eigen::Vector4cd d = m_pm.diagonal();
      for (int j = 0; j < 4; ++j) report.truth_table_phases[j] = d(j);
    }
    if (cavity.kind == CavitySpec::Kind::thermal) {
      const double sw = std::sqrt(weights[si]);
      for (int m = 0; m < pd; ++m) {
        const Eigen::Matrix4cd b = column_block(si, m);
        kraus.push_back(sw * (pm_basis ? (w2 * b * w2).eval() : b));
      }
    }
  }

  if (level == ModelLevel::analytic) {
    for (int n = 0; n < pd; ++n) {
      const Eigen::Matrix4cd m_ud =
          w2 * pair_sector_block(space, u_full, n, n) * w2;
      report.sector_unitaries[n] = m_ud;
      if (n <= pd - 3)
        sector_fids.push_back(channel_fidelity({m_ud}, ideal_ud, mode).value);
    }
  }

  FidelityResult fid;
  if (cavity.kind == CavitySpec::Kind::fock) {
    const Eigen::Matrix4cd m_ud =
        pm_basis ? (w2 * column_block(0, sectors[0]) * w2).eval()
                 : column_block(0, sectors[0]);
    fid = channel_fidelity({m_ud}, ideal_ud, mode);
  } else {
    fid = channel_fidelity(kraus, ideal_ud, mode);
  }
  report.avg_fidelity = fid.value;
  report.local_phase_correction = {fid.phi1, fid.phi2};
  report.leakage = leak_acc;
  report.leakage_valence = vleak_acc;
  if (sector_fids.size() > 1) {
    const auto [mn, mx] =
        std::minmax_element(sector_fids.begin(), sector_fids.end());
    report.photon_spread = *mx - *mn;
  }
  return report;
}

Operator single_qubit_rot(const ModelParams& params, int dot_index,
                          double t) {
  const Operator h = build_single_qubit(params, dot_index);
  Mat u = evolve_const(
      h, t, Mat::Identity(h.entries.rows(), h.entries.cols()));
  return Operator{h.space, std::move(u), false, true};
}

double not_gate_time(const ModelParams& params) {
  validate(params);
  return kPi * params.delta2 / (2 * params.omega1 * params.omega3);
}

ParallelReport run_parallel(const GateSchedule& schedule_a,
                            std::optional<double> delta_b,
                            const PropagationConfig& config) {
  const ModelParams& base = schedule_a.params;
  validate(base);
  if (base.n_dots != 2)
    throw DomainError("run_parallel expects a two-dot base schedule");
  const double da = schedule_a.delta_solved;
  if (delta_b) {
    if (!(*delta_b > 0)) throw DomainError("pair-b detuning must be > 0");
    if (*delta_b == da)
      throw DomainError("parallel pairs must use distinct detunings");
  }

  ModelParams p4 = base;
  p4.n_dots = 4;
  const double db = delta_b.value_or(da);
  p4.delta = {da, da, db, db};
  p4.lab.reset();
  validate(p4);
  const double t = schedule_a.t_gate_natural;
  const int pd = p4.photon_cutoff + 1;

  ParallelReport rep;
  rep.delta_a = da;
  rep.delta_b = delta_b ? db : 0;
  rep.t_used_natural = t;
  rep.t_used_ps = schedule_a.t_gate_ps;

  const std::vector<int> driven = delta_b ? std::vector<int>{0, 1, 2, 3}
                                          : std::vector<int>{0, 1};
  const double a_a = derive_couplings(p4, 0).a_coupling;
  const double a_b = derive_couplings(p4, 2).a_coupling;

  const SpaceDescriptor big = make_space(4, 2, p4.photon_cutoff);
  const HarmonicHamiltonian h_big = build_effective_sz(p4, driven);

  // The spin-projection decomposition below assumes H commutes with every
  // dot's S_z; verify that on the assembled operator at interior times.
  {
    Mat hval(big.total_dim(), big.total_dim());
    for (double frac : {0.37, 0.83}) {
      h_big.value_into(frac * t, hval);
      for (int d = 0; d < 4; ++d) {
        const Mat& sz = spin_z(big, d).entries;
        const double comm = (hval * sz - sz * hval).cwiseAbs().maxCoeff();
        if (comm > 1e-12)
          throw ConvergenceError(
              "projection block structure violated in the parallel model");
      }
    }
  }

  auto loop_amp = [&](double a_coup, double dd, double j) {
    const GeomPhaseCoeffs c = geom_coeffs(a_coup, dd, t);
    // <0|U|0> of the conditional displacement loop at spin projection j.
    return std::exp(-Cplx(0, 1) * c.alpha * (j * j) -
                    c.beta * c.gamma * (j * j));
  };

  if (delta_b) {
    // Per (j_a, j_b) sector the photon mode sees two rotating drives; the
    // spin register only contributes the projections.
    const SpaceDescriptor cav{0, 2, pd};
    const Mat a_op = annihilator(cav).entries;
    const Mat adag = a_op.adjoint();
    std::array<std::array<Cplx, 3>, 3> amp{};
    for (int ia = 0; ia < 3; ++ia)
      for (int ib = 0; ib < 3; ++ib) {
        const double ja = ia - 1, jb = ib - 1;
        std::vector<HarmonicTerm> terms;
        if (ja != 0) terms.push_back({(a_a * ja / 2) * adag, -da});
        if (jb != 0) terms.push_back({(a_b * jb / 2) * adag, -db});
        const HarmonicHamiltonian h(cav, Mat::Zero(pd, pd), std::move(terms));
        const StateVector psi =
            evolve_td(h, 0, t, basis_state(cav, {}, 0), config);
        amp[ia][ib] = psi.amplitudes(0);
      }

    Cplx tr = 0;
    double k_term = 0;
    for (int c = 0; c < 16; ++c) {
      const double ja = 1.0 - ((c >> 3) & 1) - ((c >> 2) & 1);
      const double jb = 1.0 - ((c >> 1) & 1) - (c & 1);
      const Cplx m = amp[static_cast<int>(ja) + 1][static_cast<int>(jb) + 1];
      const Cplx pred = loop_amp(a_a, da, ja) * loop_amp(a_b, db, jb);
      tr += std::conj(pred) * m;
      k_term += std::norm(m);
    }
    rep.fidelity = (std::norm(tr) + k_term) / (16.0 * 17.0);
    rep.crosstalk_error = 1 - rep.fidelity;
    return rep;
  }

  // Pair b undriven: evolve the computational register directly and measure
  // how far the undriven dots move from the identity.
  Mat x0 = Mat::Zero(big.total_dim(), 16);
  std::vector<int> rows(16);
  for (int c = 0; c < 16; ++c) {
    rows[c] =
        big.index({(c >> 3) & 1, (c >> 2) & 1, (c >> 1) & 1, c & 1}, 0);
    x0(rows[c], c) = 1.0;
  }
  const Mat xf = evolve_td(h_big, 0, t, x0, config);
  Eigen::MatrixXcd m16(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) m16(r, c) = xf(rows[r], c);

  double dev = 0;
  for (int c = 0; c < 16; ++c)
    for (int r = 0; r < 16; ++r) {
      if (r == c) continue;
      dev = std::max(dev, std::abs(m16(r, c)));
      if ((r >> 2) == (c >> 2))
        dev = std::max(dev, std::abs(m16(r, r) - m16(c, c)));
    }
  rep.spectator_deviation = dev;

  Cplx tr = 0;
  double k_term = 0;
  for (int c = 0; c < 16; ++c) {
    const double ja = 1.0 - ((c >> 3) & 1) - ((c >> 2) & 1);
    tr += std::conj(loop_amp(a_a, da, ja)) * m16(c, c);
    k_term += std::norm(m16(c, c));
  }
  rep.fidelity = (std::norm(tr) + k_term) / (16.0 * 17.0);
  rep.crosstalk_error = 1 - rep.fidelity;
  return rep;
}

std::vector<DecoherencePoint> decoherence_scan(
    const GateSchedule& schedule, const std::vector<double>& kappa_values,
    const PropagationConfig& config) {
  const ModelParams& params = schedule.params;
  validate(params);
  if (params.n_dots != 2)
    throw DomainError("decoherence_scan requires a two-dot parameter set");
  for (double kappa : kappa_values)
    if (kappa < 0) throw DomainError("kappa must be >= 0");

  const double a_c = schedule.couplings.a_coupling;
  const double b_c = schedule.couplings.b_coupling;
  const double delta = schedule.delta_solved;
  const double t = schedule.t_gate_natural;
  const int pd = params.photon_cutoff + 1;

  const SpaceDescriptor cav{0, 2, pd};
  const Mat a_op = annihilator(cav).entries;
  const Mat ad = a_op.adjoint();
  Eigen::VectorXcd n_diag(pd);
  for (int n = 0; n < pd; ++n) n_diag(n) = n;

  const int steps =
      config.step_count > 0
          ? config.step_count
          : static_cast<int>(std::ceil(
                config.steps_per_period * std::max(1.0, t * delta / kTwoPi)));
  const double dt = t / steps;

  // Input (|++> + |-->)/sqrt(2) x vacuum: only the j = +/-1 projections
  // enter. Each (j, j') block of the density matrix evolves under
  //   r' = -i (H_j r - r H_j') + kappa (a r a^dag - {a^dag a, r}/2),
  //   H_j(t) = b j + (a j / 2)(a^dag e^{-i delta t} + h.c.).
  auto h_of = [&](double j, double time, Mat& out) {
    const Cplx p = std::polar(a_c * j / 2, -delta * time);
    out = p * ad + std::conj(p) * a_op;
    out.diagonal().array() += b_c * j;
  };
  auto evolve_block = [&](double j1, double j2, double kappa) {
    Mat r = Mat::Zero(pd, pd);
    r(0, 0) = 0.5;
    Mat h1(pd, pd), h2(pd, pd), k1(pd, pd), k2(pd, pd), k3(pd, pd),
        k4(pd, pd), stage(pd, pd);
    auto deriv = [&](const Mat& rr, double time, Mat& out) {
      h_of(j1, time, h1);
      h_of(j2, time, h2);
      out.noalias() = h1 * rr;
      out.noalias() -= rr * h2;
      out *= Cplx(0, -1);
      if (kappa > 0) {
        out.noalias() += kappa * (a_op * (rr * ad));
        out.noalias() -= (kappa / 2) * (n_diag.asDiagonal() * rr);
        out.noalias() -= (kappa / 2) * (rr * n_diag.asDiagonal());
      }
    };
    for (int s = 0; s < steps; ++s) {
      const double t0 = s * dt;
      deriv(r, t0, k1);
      stage = r + (dt / 2) * k1;
      deriv(stage, t0 + dt / 2, k2);
      stage = r + (dt / 2) * k2;
      deriv(stage, t0 + dt / 2, k3);
      stage = r + dt * k3;
      deriv(stage, t0 + dt, k4);
      r += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
      if (j1 == j2) r = ((r + r.adjoint()) / 2).eval();
    }
    return r;
  };

  std::vector<DecoherencePoint> points;
  points.reserve(kappa_values.size());
  for (double kappa : kappa_values) {
    const Mat r_pp = evolve_block(1, 1, kappa);
    const Mat r_pm = evolve_block(1, -1, kappa);
    const Mat r_mm = evolve_block(-1, -1, kappa);
    const double tr_p = r_pp.trace().real();
    const double tr_m = r_mm.trace().real();
    if (std::abs(tr_p + tr_m - 1) > 1e-6)
      throw ConvergenceError("trace drift in the photon-loss integration");
    const Cplx coh = r_pm.trace();
    const double f_coh = 2 * std::abs(coh);
    // Ideal output is (-|++> + |-->)/sqrt(2) up to a global phase.
    const double fid = (tr_p + tr_m) / 2 - coh.real();
    const double tau =
        (kappa == 0 || f_coh >= 1)
            ? std::numeric_limits<double>::infinity()
            : schedule.t_gate_ps / (-std::log(f_coh));
    points.push_back({kappa, fid, tau});
  }
  return points;
}

}  // namespace spinbus
