#include "spinbus/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include <json.hpp>

#include "spinbus/errors.hpp"
#include "spinbus/gates.hpp"
#include "spinbus/hamiltonians.hpp"
#include "spinbus/space.hpp"

namespace spinbus {

namespace {

using nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json cplx_json(std::complex<double> z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json schedule_json(const GateSchedule& s) {
  ordered_json j;
  j["dot_pair"] = {s.dot_pair.first, s.dot_pair.second};
  j["k"] = s.k;
  j["delta_solved"] = s.delta_solved;
  if (s.g_required)
    j["g_required"] = *s.g_required;
  else
    j["g_required"] = nullptr;
  if (s.omega_product_required)
    j["omega_product_required"] = *s.omega_product_required;
  else
    j["omega_product_required"] = nullptr;
  j["t_gate_natural"] = s.t_gate_natural;
  j["t_gate_ps"] = s.t_gate_ps;
  j["a_coupling"] = s.couplings.a_coupling;
  j["b_coupling"] = s.couplings.b_coupling;
  ordered_json p;
  p["n_dots"] = s.params.n_dots;
  p["omega1"] = s.params.omega1;
  p["omega2"] = s.params.omega2;
  p["omega3"] = s.params.omega3;
  p["g"] = s.params.g;
  p["delta1"] = s.params.delta1;
  p["delta2"] = s.params.delta2;
  p["delta"] = s.params.delta;
  p["photon_cutoff"] = s.params.photon_cutoff;
  j["params"] = p;
  return j;
}

ordered_json approx_json(const ApproximationReport& rep) {
  ordered_json j;
  j["threshold"] = rep.threshold;
  j["all_pass"] = rep.all_pass();
  ordered_json entries = ordered_json::array();
  for (const ApproximationEntry& e : rep.entries) {
    ordered_json item;
    item["condition_name"] = e.condition_name;
    item["small_value"] = e.small_value;
    item["large_value"] = e.large_value;
    item["ratio"] = e.ratio;
    item["status"] = e.pass ? "pass" : "warn";
    entries.push_back(item);
  }
  j["entries"] = entries;
  return j;
}

std::vector<double> geometric_ladder(const SweepSpec& spec) {
  std::vector<double> values;
  if (spec.count == 1) {
    values.push_back(spec.start);
    return values;
  }
  const double ratio = spec.stop / spec.start;
  for (int i = 0; i < spec.count; ++i)
    values.push_back(spec.start *
                     std::pow(ratio, static_cast<double>(i) / (spec.count - 1)));
  return values;
}

struct Body {
  ordered_json data;
  std::string csv;
  double observable = 0;
  const char* observable_name = "";
};

ordered_json gate_report_json(const GateReport& rep) {
  ordered_json j;
  j["avg_fidelity"] = rep.avg_fidelity;
  j["leakage"] = rep.leakage;
  j["leakage_valence"] = rep.leakage_valence;
  j["photon_spread"] = rep.photon_spread;
  j["local_phase_correction"] = {rep.local_phase_correction[0],
                                 rep.local_phase_correction[1]};
  return j;
}

Body run_body(const std::string& name, const ExperimentConfig& cfg) {
  const GateSchedule sched = schedule_from_config(cfg);
  const PropagationConfig prop = propagation_from_config(cfg);
  Body b;

  if (name == "params") {
    const ApproximationReport approx =
        check_approximations(sched.params, cfg.approximation_threshold);
    b.data["experiment"] = "params";
    b.data["schedule"] = schedule_json(sched);
    b.data["approximations"] = approx_json(approx);
    b.observable = sched.delta_solved;
    b.observable_name = "delta_solved";
    return b;
  }

  if (name == "truth-table") {
    const CavitySpec cav = cfg.mean_photon
                               ? CavitySpec::thermal(*cfg.mean_photon)
                               : CavitySpec::fock(cfg.cavity_n.value_or(0));
    const GateReport rep =
        run_cz(sched, cfg.model_level, cav, cfg.fidelity_mode, prop);
    b.data["experiment"] = "truth-table";
    b.data["model_level"] = model_level_name(cfg.model_level);
    b.data["fidelity_mode"] = fidelity_mode_name(cfg.fidelity_mode);
    b.data["cavity"] =
        cfg.mean_photon
            ? ordered_json{{"kind", "thermal"}, {"mean_photon", *cfg.mean_photon}}
            : ordered_json{{"kind", "fock"}, {"n", cfg.cavity_n.value_or(0)}};
    b.data["t_gate_ps"] = rep.t_gate_ps;
    ordered_json phases;
    phases["pp"] = cplx_json(rep.truth_table_phases[0]);
    phases["pm"] = cplx_json(rep.truth_table_phases[1]);
    phases["mp"] = cplx_json(rep.truth_table_phases[2]);
    phases["mm"] = cplx_json(rep.truth_table_phases[3]);
    b.data["phases"] = phases;
    const ordered_json rep_fields = gate_report_json(rep);
    for (const auto& item : rep_fields.items())
      b.data[item.key()] = item.value();
    b.observable = rep.avg_fidelity;
    b.observable_name = "avg_fidelity";
    return b;
  }

  if (name == "photon-sweep") {
    const SweepSpec range = *cfg.photon_range;
    std::string csv =
        "n,fidelity,leakage,phase_pp_re,phase_pp_im,phase_mm_re,"
        "phase_mm_im\n";
    double acc = 0;
    int rows = 0;
    for (int n = static_cast<int>(range.start);
         n <= static_cast<int>(range.stop); ++n) {
      const GateReport rep = run_cz(sched, cfg.model_level,
                                    CavitySpec::fock(n), cfg.fidelity_mode,
                                    prop);
      csv += std::to_string(n) + "," + fmt17(rep.avg_fidelity) + "," +
             fmt17(rep.leakage) + "," +
             fmt17(rep.truth_table_phases[0].real()) + "," +
             fmt17(rep.truth_table_phases[0].imag()) + "," +
             fmt17(rep.truth_table_phases[3].real()) + "," +
             fmt17(rep.truth_table_phases[3].imag()) + "\n";
      acc += rep.avg_fidelity;
      ++rows;
    }
    b.csv = csv;
    b.observable = acc / rows;
    b.observable_name = "mean_fidelity";
    return b;
  }

  if (name == "compare") {
    const int n0 = cfg.cavity_n.value_or(0);
    const CavitySpec cav = CavitySpec::fock(n0);
    const GateReport full = run_cz(sched, ModelLevel::full_numeric, cav,
                                   cfg.fidelity_mode, prop);
    const GateReport ana =
        run_cz(sched, ModelLevel::analytic, cav, cfg.fidelity_mode, prop);
    const double chain =
        channel_fidelity({full.sector_unitaries.at(n0)},
                         ana.sector_unitaries.at(n0), FidelityMode::strict)
            .value;
    b.data["experiment"] = "compare";
    b.data["fidelity_mode"] = fidelity_mode_name(cfg.fidelity_mode);
    b.data["cavity_n"] = n0;
    b.data["t_gate_ps"] = sched.t_gate_ps;
    b.data["full"] = gate_report_json(full);
    b.data["analytic"] = gate_report_json(ana);
    b.data["full_vs_analytic_fidelity"] = chain;
    b.observable = full.avg_fidelity;
    b.observable_name = "full_avg_fidelity";
    return b;
  }

  if (name == "parallel") {
    std::string csv = "delta_separation_mev,crosstalk_error\n";
    double last = 0;
    for (double sep : geometric_ladder(*cfg.separation_ladder)) {
      const ParallelReport pr =
          run_parallel(sched, sched.delta_solved + sep, prop);
      csv += fmt17(sep) + "," + fmt17(pr.crosstalk_error) + "\n";
      last = pr.crosstalk_error;
    }
    b.csv = csv;
    b.observable = last;
    b.observable_name = "last_crosstalk_error";
    return b;
  }

  if (name == "decoherence") {
    std::vector<double> kappas{0.0};
    for (double kappa : geometric_ladder(*cfg.kappa_ladder))
      kappas.push_back(kappa);
    const std::vector<DecoherencePoint> points =
        decoherence_scan(sched, kappas, prop);
    std::string csv = "kappa_mev,fidelity,tau_eff_ps\n";
    double acc = 0;
    for (const DecoherencePoint& p : points) {
      csv += fmt17(p.kappa) + "," + fmt17(p.fidelity) + "," +
             fmt17(p.tau_eff_ps) + "\n";
      acc += p.fidelity;
    }
    b.csv = csv;
    b.observable = acc / static_cast<double>(points.size());
    b.observable_name = "mean_fidelity";
    return b;
  }

  if (name == "single-qubit") {
    const double tn = not_gate_time(sched.params);
    const Operator u_not = single_qubit_rot(sched.params, 0, tn);
    const Operator u_half = single_qubit_rot(sched.params, 0, tn / 2);
    std::vector<int> lv(static_cast<size_t>(sched.params.n_dots), 0);
    auto block2 = [&](const Operator& u) {
      std::array<int, 2> idx{};
      for (int l = 0; l < 2; ++l) {
        lv[0] = l;
        idx[l] = u.space.index(lv, 0);
      }
      lv[0] = 0;
      ordered_json rows = ordered_json::array();
      for (int r = 0; r < 2; ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < 2; ++c)
          row.push_back(cplx_json(u.entries(idx[r], idx[c])));
        rows.push_back(row);
      }
      return rows;
    };
    b.data["experiment"] = "single-qubit";
    b.data["not_time_ps"] = convert_time(tn, TimeDirection::kNaturalToPs);
    b.data["pi2_time_ps"] = convert_time(tn / 2, TimeDirection::kNaturalToPs);
    b.data["not_unitary"] = block2(u_not);
    b.data["pi2_unitary"] = block2(u_half);
    b.observable = convert_time(tn, TimeDirection::kNaturalToPs);
    b.observable_name = "not_time_ps";
    return b;
  }

  throw ConfigError("unknown experiment \"" + name + "\"");
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  out.flush();
  return out.good();
}

}  // namespace

ExperimentResult run_experiment(const std::string& name,
                                const ExperimentConfig& cfg_in, bool strict,
                                const std::string& out_path,
                                const std::string& format) {
  static const std::set<std::string> kNames{
      "params",   "truth-table", "photon-sweep", "compare",
      "parallel", "decoherence", "single-qubit"};
  if (!kNames.count(name))
    throw ConfigError("unknown experiment \"" + name + "\"");

  const bool csv_native =
      name == "photon-sweep" || name == "parallel" || name == "decoherence";
  const std::string native = csv_native ? "csv" : "json";
  if (!format.empty() && format != native)
    throw ConfigError("experiment \"" + name + "\" emits " + native);

  ExperimentConfig cfg = cfg_in;
  // Resolve sweep defaults once so the convergence rerun sees the same grid.
  if (name == "photon-sweep" && !cfg.photon_range)
    cfg.photon_range =
        SweepSpec{0, static_cast<double>(cfg.photon_cutoff - 2),
                  cfg.photon_cutoff - 1};
  if (name == "decoherence" && !cfg.kappa_ladder)
    throw ConfigError("experiment \"decoherence\" needs key \"kappa_ladder\"");
  if (name == "parallel" && !cfg.separation_ladder)
    throw ConfigError(
        "experiment \"parallel\" needs key \"separation_ladder\"");

  const GateSchedule sched = schedule_from_config(cfg);
  const ApproximationReport approx =
      check_approximations(sched.params, cfg.approximation_threshold);
  if (strict && !approx.all_pass()) {
    ExperimentResult res;
    res.exit_code = 2;
    res.message = "approximation ratios exceed " +
                  fmt17(cfg.approximation_threshold) +
                  " under --strict; nothing written";
    return res;
  }

  const auto wall_start = std::chrono::steady_clock::now();
  const Body body = run_body(name, cfg);
  ExperimentConfig cfg_guard = cfg;
  cfg_guard.photon_cutoff += 4;
  const Body guard = run_body(name, cfg_guard);
  const double wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  const double drift = std::abs(body.observable - guard.observable);
  const bool guard_ok = drift < cfg.convergence_tol;

  const std::string data_path =
      out_path.empty() ? name + "." + native : out_path;
  const std::string data_text =
      csv_native ? body.csv : body.data.dump(2) + "\n";

  ordered_json manifest;
  manifest["artifact_version"] = "1.0.0";
  manifest["experiment"] = name;
  manifest["data_file"] = data_path;
  manifest["format"] = native;
  manifest["config"] = cfg_in.raw.empty()
                           ? ordered_json::object()
                           : ordered_json::parse(cfg_in.raw);
  manifest["resolved"] = schedule_json(sched);
  manifest["integrator"] = ordered_json{{"scheme", "commutator_free_4"},
                                        {"steps_per_period",
                                         cfg.steps_per_period},
                                        {"step_count", cfg.step_count},
                                        {"norm_tolerance",
                                         cfg.norm_tolerance}};
  manifest["approximations"] = approx_json(approx);
  manifest["convergence_guard"] =
      ordered_json{{"observable", body.observable_name},
                   {"value", body.observable},
                   {"value_at_cutoff_plus_4", guard.observable},
                   {"drift", drift},
                   {"tolerance", cfg.convergence_tol},
                   {"passed", guard_ok}};
  manifest["wall_clock_seconds"] = wall_seconds;

  ExperimentResult res;
  if (!write_file(data_path, data_text)) {
    res.exit_code = 4;
    res.message = "cannot write output file \"" + data_path + "\"";
    return res;
  }
  res.data_path = data_path;
  const std::string manifest_path = data_path + ".manifest.json";
  if (!write_file(manifest_path, manifest.dump(2) + "\n")) {
    res.exit_code = 4;
    res.message = "cannot write manifest \"" + manifest_path + "\"";
    return res;
  }
  res.manifest_path = manifest_path;

  res.exit_code = guard_ok ? 0 : 3;
  res.message = name + ": " + body.observable_name + "=" +
                fmt17(body.observable) + "; wrote " + data_path +
                " and " + manifest_path;
  if (!guard_ok)
    res.message += "; convergence guard failed (drift " + fmt17(drift) +
                   " >= " + fmt17(cfg.convergence_tol) + ")";
  return res;
}

}  // namespace spinbus
