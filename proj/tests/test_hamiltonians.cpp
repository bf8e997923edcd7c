#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinbus/errors.hpp"
#include "spinbus/hamiltonians.hpp"
#include "spinbus/model.hpp"
#include "spinbus/propagation.hpp"
#include "spinbus/space.hpp"

using namespace spinbus;
using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

namespace {

ModelParams worked_example(int cutoff = 3) {
  ModelParams p;
  p.n_dots = 2;
  p.omega1 = 1;
  p.omega2 = 1;
  p.omega3 = 1;
  p.g = 16.0 / 21.0;
  p.delta1 = 10;
  p.delta2 = 5;
  p.delta = {0.0759034982694061, 0.0759034982694061};
  p.photon_cutoff = cutoff;
  return p;
}

LabFrequencies consistent_lab(const ModelParams& p) {
  LabFrequencies lf;
  lf.omega_v = 0;
  lf.omega_down = 1000;
  lf.omega_up = 1001;
  lf.omega_l2 = lf.omega_up - p.delta1;             // 991
  lf.omega_l1 = lf.omega_up - p.delta2;             // 996
  lf.omega_l3 = lf.omega_down - p.delta2;           // 995
  lf.omega_c = lf.omega_down - p.delta1 - p.delta[0];
  return lf;
}

}  // namespace

TEST_CASE("level count per model family") {
  CHECK(levels_for(HamiltonianLevel::lab) == 3);
  CHECK(levels_for(HamiltonianLevel::interaction) == 3);
  CHECK(levels_for(HamiltonianLevel::effective_raw) == 2);
  CHECK(levels_for(HamiltonianLevel::effective_pm) == 2);
  CHECK(levels_for(HamiltonianLevel::effective_sz) == 2);
  CHECK(levels_for(HamiltonianLevel::single_qubit) == 2);
}

TEST_CASE("harmonic container rejects malformed parts") {
  const SpaceDescriptor sp = make_space(1, 2, 2);
  const int dim = sp.total_dim();
  CHECK_THROWS_AS(
      HarmonicHamiltonian(sp, Mat::Zero(dim, dim + 1), {}), DomainError);
  Mat skew = Mat::Zero(dim, dim);
  skew(0, 1) = Cplx(0, 1);  // not Hermitian on its own
  CHECK_THROWS_AS(HarmonicHamiltonian(sp, skew, {}), DomainError);
  CHECK_THROWS_AS(
      HarmonicHamiltonian(sp, Mat::Zero(dim, dim),
                          {HarmonicTerm{Mat::Zero(2, 2), 1.0}}),
      DomainError);
}

TEST_CASE("harmonic value is static plus rotating sidebands") {
  const SpaceDescriptor sp = make_space(1, 2, 2);
  const int dim = sp.total_dim();
  Mat stat = Mat::Identity(dim, dim);
  Mat op = Mat::Zero(dim, dim);
  op(0, 1) = 2.0;
  const double f = 0.7;
  const HarmonicHamiltonian h(sp, stat, {HarmonicTerm{op, f}});
  CHECK(h.fastest_frequency() == doctest::Approx(f));
  CHECK_FALSE(h.time_independent());
  const double t = 1.3;
  const Mat v = h.value_at(t).entries;
  const Cplx phase = std::polar(1.0, f * t);
  CHECK(std::abs(v(0, 1) - 2.0 * phase) < 1e-15);
  CHECK(std::abs(v(1, 0) - 2.0 * std::conj(phase)) < 1e-15);
  CHECK(std::abs(v(0, 0) - 1.0) < 1e-15);
  CHECK(HarmonicHamiltonian(sp, stat, {}).time_independent());
  CHECK(HarmonicHamiltonian(sp, stat, {}).fastest_frequency() == 0.0);
}

TEST_CASE("every model builder yields a Hermitian operator at generic times") {
  ModelParams p = worked_example();
  p.lab = consistent_lab(p);
  for (double t : {0.0, 0.37, 2.19, 41.7}) {
    CHECK(build_interaction(p, t).verify_hermitian(1e-12));
    CHECK(build_effective_raw(p, t, {0, 1}).verify_hermitian(1e-12));
    CHECK(build_effective_pm(p, t, {0, 1}).verify_hermitian(1e-12));
    CHECK(build_effective_sz(p, t, {0, 1}).verify_hermitian(1e-12));
    const auto [h0, drive] = build_lab(p, t);
    CHECK(h0.verify_hermitian(1e-12));
    CHECK(drive.verify_hermitian(1e-12));
  }
  CHECK(build_single_qubit(p, 0).verify_hermitian(1e-12));
}

TEST_CASE("interaction model carries one sideband per channel at its detuning") {
  const ModelParams p = worked_example();
  const HarmonicHamiltonian h = build_interaction(p);
  REQUIRE(h.terms().size() == 4);  // two laser channels + cavity per dot
  CHECK(h.terms()[0].freq == doctest::Approx(p.delta1));
  CHECK(h.terms()[1].freq == doctest::Approx(p.delta2));
  CHECK(h.terms()[2].freq == doctest::Approx(p.delta1 + p.delta[0]));
  CHECK(h.terms()[3].freq == doctest::Approx(p.delta1 + p.delta[1]));
  CHECK(h.static_part().cwiseAbs().maxCoeff() == 0);
  CHECK(h.fastest_frequency() == doctest::Approx(p.delta1 + p.delta[0]));

  const SpaceDescriptor sp = h.space();
  // omega2 channel: |up><v| on each dot
  const Mat& ch1 = h.terms()[0].op;
  CHECK(std::abs(ch1(sp.index({0, 0}, 1), sp.index({2, 0}, 1)) - p.omega2) <
        1e-15);
  // cavity channel of dot 0: g a |down><v|
  const Mat& cav = h.terms()[2].op;
  CHECK(std::abs(cav(sp.index({1, 0}, 0), sp.index({2, 0}, 1)) - p.g) < 1e-15);
  CHECK(std::abs(cav(sp.index({1, 0}, 1), sp.index({2, 0}, 2)) -
                 p.g * std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("two-level model in the up/down basis has the Raman and cavity rates") {
  const ModelParams p = worked_example();
  const DerivedCouplings dc = derive_couplings(p, 0);
  const HarmonicHamiltonian h = build_effective_raw(p, {0, 1});
  const SpaceDescriptor sp = h.space();
  REQUIRE(h.terms().size() == 2);
  CHECK(h.terms()[0].freq == doctest::Approx(-p.delta[0]));

  // static: (B/2) sigma_x per driven dot
  const Mat& stat = h.static_part();
  CHECK(std::abs(stat(sp.index({0, 0}, 0), sp.index({1, 0}, 0)) -
                 0.5 * dc.b_coupling) < 1e-14);
  CHECK(std::abs(stat(sp.index({0, 0}, 0), sp.index({0, 1}, 0)) -
                 0.5 * dc.b_coupling) < 1e-14);
  // sideband: (A/2) a^dag sigma_up,down with sqrt(n+1) enhancement
  const Mat& side = h.terms()[0].op;
  CHECK(std::abs(side(sp.index({0, 0}, 1), sp.index({1, 0}, 0)) -
                 0.5 * dc.a_coupling) < 1e-14);
  CHECK(std::abs(side(sp.index({0, 0}, 2), sp.index({1, 0}, 1)) -
                 0.5 * dc.a_coupling * std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("plus-minus rotation links the two-level models exactly") {
  const ModelParams p = worked_example();
  const SpaceDescriptor sp = make_space(p.n_dots, 2, p.photon_cutoff);
  const Mat w = basis_rotation_pm(sp).entries;
  for (double t : {0.0, 0.61, 17.3}) {
    const Mat raw = build_effective_raw(p, t, {0, 1}).entries;
    const Mat pm = build_effective_pm(p, t, {0, 1}).entries;
    CHECK((w * raw * w - pm).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("conditional-cavity model is the sideband part diagonal in S_z") {
  const ModelParams p = worked_example();
  const DerivedCouplings dc = derive_couplings(p, 0);
  const HarmonicHamiltonian h = build_effective_sz(p, {0});
  const SpaceDescriptor sp = h.space();
  REQUIRE(h.terms().size() == 1);
  CHECK(h.static_part().cwiseAbs().maxCoeff() == 0);
  const Mat& side = h.terms()[0].op;
  CHECK(std::abs(side(sp.index({0, 0}, 1), sp.index({0, 0}, 0)) -
                 0.25 * dc.a_coupling) < 1e-14);
  CHECK(std::abs(side(sp.index({1, 0}, 1), sp.index({1, 0}, 0)) +
                 0.25 * dc.a_coupling) < 1e-14);
  // undriven dot does not alter the rate, and no spin flips appear
  CHECK(std::abs(side(sp.index({0, 1}, 1), sp.index({0, 1}, 0)) -
                 0.25 * dc.a_coupling) < 1e-14);
  CHECK(std::abs(side(sp.index({1, 0}, 1), sp.index({0, 0}, 0))) == 0);
}

TEST_CASE("single-channel drive acts on the chosen dot only") {
  const ModelParams p = worked_example();
  const Operator h = build_single_qubit(p, 1);
  const SpaceDescriptor sp = h.space;
  const double coupling = p.omega1 * p.omega3 / p.delta2;
  CHECK(std::abs(h.entries(sp.index({0, 0}, 0), sp.index({0, 1}, 0)) -
                 coupling) < 1e-15);
  CHECK(std::abs(h.entries(sp.index({0, 0}, 0), sp.index({1, 0}, 0))) == 0);
  CHECK_THROWS_AS(build_single_qubit(p, 5), DomainError);
}

TEST_CASE("driven-dot lists are validated") {
  const ModelParams p = worked_example();
  CHECK_THROWS_AS(build_effective_sz(p, {}), DomainError);
  CHECK_THROWS_AS(build_effective_sz(p, {2}), DomainError);
  CHECK_THROWS_AS(build_effective_pm(p, {-1}), DomainError);
}

TEST_CASE("lab model requires the frequency block") {
  const ModelParams p = worked_example();
  CHECK_THROWS_AS(build_lab(p), DomainError);
}

TEST_CASE("lab model rejects frequencies off the absolute resonance ladder") {
  ModelParams p = worked_example();
  LabFrequencies lf = consistent_lab(p);
  // Shift laser 2 and the cavity together: the two-photon differences stay
  // valid, so parameter validation passes, but each absolute detuning is off.
  lf.omega_l2 += 0.5;
  lf.omega_c += 0.5;
  p.lab = lf;
  CHECK_NOTHROW(validate(p));
  CHECK_THROWS_WITH_AS(build_lab(p),
                       "lab frequencies inconsistent with detunings",
                       DomainError);
}

TEST_CASE("rotating at the frame energies turns the lab drive into the detuned model") {
  ModelParams p = worked_example(2);
  p.lab = consistent_lab(p);
  const LabHamiltonian lab = build_lab(p);
  for (double t : {0.13, 0.29}) {
    const Mat drive = lab.drive.value_at(t).entries;
    // e^{+i h0 t} drive e^{-i h0 t}
    const Mat left = evolve_const(lab.h0, -t, drive);
    const Mat rotated = evolve_const(lab.h0, -t, left.adjoint()).adjoint();
    const Mat expected = build_interaction(p, t).entries;
    CHECK((rotated - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}
