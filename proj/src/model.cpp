#include "spinbus/model.hpp"

#include <cmath>
#include <sstream>

#include "spinbus/errors.hpp"

namespace spinbus {

double convert_time(double value, TimeDirection direction) {
  if (!std::isfinite(value)) throw DomainError("convert_time: value not finite");
  return direction == TimeDirection::kNaturalToPs ? value * kHbarMevPs
                                                  : value / kHbarMevPs;
}

void validate(const ModelParams& p) {
  std::vector<std::string> problems;
  if (p.n_dots < 1) problems.push_back("n_dots must be >= 1");
  if (!(p.omega1 > 0)) problems.push_back("omega1 must be > 0");
  if (!(p.omega2 > 0)) problems.push_back("omega2 must be > 0");
  if (!(p.omega3 > 0)) problems.push_back("omega3 must be > 0");
  if (!(p.g > 0)) problems.push_back("g must be > 0");
  if (!(p.delta1 > 0)) problems.push_back("delta1 must be > 0");
  if (!(p.delta2 > 0)) problems.push_back("delta2 must be > 0");
  if (p.delta1 == p.delta2) problems.push_back("delta1 must differ from delta2");
  if (static_cast<int>(p.delta.size()) != p.n_dots)
    problems.push_back("delta must have one entry per dot");
  for (std::size_t i = 0; i < p.delta.size(); ++i) {
    if (!(p.delta[i] > 0)) {
      std::ostringstream os;
      os << "delta[" << i << "] must be > 0";
      problems.push_back(os.str());
    }
  }
  if (p.photon_cutoff < 2) problems.push_back("photon_cutoff must be >= 2");
  if (p.lab) {
    const LabFrequencies& lf = *p.lab;
    const double w_ud = lf.omega_up - lf.omega_down;
    for (std::size_t i = 0; i < p.delta.size(); ++i) {
      if (std::abs(w_ud + p.delta[i] - (lf.omega_l2 - lf.omega_c)) > 1e-12) {
        problems.push_back(
            "lab frequencies violate omega_updown + delta = omega_l2 - omega_c");
        break;
      }
    }
    if (std::abs(w_ud - (lf.omega_l1 - lf.omega_l3)) > 1e-12)
      problems.push_back(
          "lab frequencies violate omega_updown = omega_l1 - omega_l3");
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid model parameters:";
    for (const std::string& s : problems) os << "\n  - " << s;
    throw DomainError(os.str());
  }
}

DerivedCouplings derive_couplings(const ModelParams& p, int dot_index) {
  if (dot_index < 0 || dot_index >= p.n_dots ||
      dot_index >= static_cast<int>(p.delta.size()))
    throw DomainError("unknown dot");
  DerivedCouplings dc;
  const double di = p.delta[dot_index];
  dc.a_coupling =
      0.5 * p.g * p.omega2 * (1.0 / p.delta1 + 1.0 / (p.delta1 + di));
  dc.b_coupling = 2.0 * p.omega1 * p.omega3 / p.delta2;
  return dc;
}

bool ApproximationReport::all_pass() const {
  for (const ApproximationEntry& e : entries)
    if (!e.pass) return false;
  return true;
}

namespace {

void add_entry(ApproximationReport& report, const std::string& name,
               double small_value, double large_value) {
  ApproximationEntry e;
  e.condition_name = name;
  e.small_value = small_value;
  e.large_value = large_value;
  e.ratio = small_value / large_value;
  e.pass = !(e.ratio > report.threshold);
  report.entries.push_back(e);
}

std::string dot_suffix(const ModelParams& p, int dot) {
  bool uniform = true;
  for (double d : p.delta)
    if (d != p.delta.front()) uniform = false;
  if (uniform) return "";
  std::ostringstream os;
  os << " (dot " << dot << ")";
  return os.str();
}

}  // namespace

ApproximationReport check_approximations(const ModelParams& p,
                                         double threshold) {
  validate(p);
  if (p.delta1 <= p.delta2) throw DomainError("channel separation negative");
  ApproximationReport report;
  report.threshold = threshold;

  add_entry(report, "delta1 vs omega1", p.omega1, p.delta1);
  add_entry(report, "delta1 vs omega2", p.omega2, p.delta1);
  add_entry(report, "delta1 vs omega3", p.omega3, p.delta1);
  add_entry(report, "delta1 vs g", p.g, p.delta1);
  add_entry(report, "delta2 vs omega1", p.omega1, p.delta2);
  add_entry(report, "delta2 vs omega2", p.omega2, p.delta2);
  add_entry(report, "delta2 vs omega3", p.omega3, p.delta2);
  add_entry(report, "delta2 vs g", p.g, p.delta2);

  const double sep = p.delta1 - p.delta2;
  const double cross12 =
      (p.delta1 + p.delta2) * p.omega1 * p.omega2 / (2.0 * p.delta1 * p.delta2);
  const double cross23 =
      (p.delta1 + p.delta2) * p.omega2 * p.omega3 / (2.0 * p.delta1 * p.delta2);
  add_entry(report, "channel_sep vs raman_cross_12", cross12, sep);
  add_entry(report, "channel_sep vs raman_cross_23", cross23, sep);

  const bool uniform = [&] {
    for (double d : p.delta)
      if (d != p.delta.front()) return false;
    return true;
  }();
  const int dot_count = uniform ? 1 : p.n_dots;
  for (int i = 0; i < dot_count; ++i) {
    const double di = p.delta[i];
    const std::string sfx = dot_suffix(p, i);
    const double cav1 = (2.0 * p.delta1 + di) * p.omega1 * p.g /
                        (2.0 * p.delta1 * (p.delta1 + di));
    const double cav3 = (2.0 * p.delta1 + di) * p.omega3 * p.g /
                        (2.0 * p.delta1 * (p.delta1 + di));
    add_entry(report, "channel_sep vs delta" + sfx, di, sep);
    add_entry(report, "channel_sep vs cavity_cross_1" + sfx, cav1, sep);
    add_entry(report, "channel_sep vs cavity_cross_3" + sfx, cav3, sep);
    const DerivedCouplings dc = derive_couplings(p, i);
    add_entry(report, "b vs delta" + sfx, di, dc.b_coupling);
    add_entry(report, "b vs a" + sfx, dc.a_coupling, dc.b_coupling);
  }
  return report;
}

ModelParams rescale_detunings(const ModelParams& p, double lambda) {
  validate(p);
  if (!(lambda > 0)) throw DomainError("rescale_detunings: lambda must be > 0");
  ModelParams q = p;
  const double root = std::sqrt(lambda);
  q.omega1 = p.omega1 * root;
  q.omega2 = p.omega2 * root;
  q.omega3 = p.omega3 * root;
  q.delta1 = p.delta1 * lambda;
  q.delta2 = p.delta2 * lambda;
  const DerivedCouplings dc = derive_couplings(p, 0);
  const double d0 = p.delta[0];
  q.g = 2.0 * dc.a_coupling /
        (q.omega2 * (1.0 / q.delta1 + 1.0 / (q.delta1 + d0)));
  q.lab.reset();
  validate(q);
  return q;
}

}  // namespace spinbus
