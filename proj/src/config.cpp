#include "spinbus/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "spinbus/errors.hpp"

namespace spinbus {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys{
    "n_dots",        "omega1",
    "omega2",        "omega3",
    "g",             "delta1",
    "delta2",        "photon_cutoff",
    "k",             "model_level",
    "fidelity_mode", "steps_per_period",
    "step_count",    "norm_tolerance",
    "convergence_tol", "approximation_threshold",
    "cavity_n",      "mean_photon",
    "photon_range",  "kappa_ladder",
    "separation_ladder", "omega_up",
    "omega_down",    "omega_v",
    "omega_c",       "omega_l1",
    "omega_l2",      "omega_l3"};

const std::set<std::string> kLabKeys{"omega_up", "omega_down", "omega_v",
                                     "omega_c",  "omega_l1",   "omega_l2",
                                     "omega_l3"};

class Checker {
 public:
  explicit Checker(const json& doc) : doc_(doc) {}

  std::optional<double> number(const std::string& key) {
    if (!doc_.contains(key)) return std::nullopt;
    if (!doc_[key].is_number()) {
      problems_.push_back("key \"" + key + "\" must be a number");
      return std::nullopt;
    }
    return doc_[key].get<double>();
  }

  std::optional<int> integer(const std::string& key) {
    if (!doc_.contains(key)) return std::nullopt;
    if (!doc_[key].is_number_integer()) {
      problems_.push_back("key \"" + key + "\" must be an integer");
      return std::nullopt;
    }
    return doc_[key].get<int>();
  }

  std::optional<std::string> text(const std::string& key) {
    if (!doc_.contains(key)) return std::nullopt;
    if (!doc_[key].is_string()) {
      problems_.push_back("key \"" + key + "\" must be a string");
      return std::nullopt;
    }
    return doc_[key].get<std::string>();
  }

  void complain(const std::string& p) { problems_.push_back(p); }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  const json& doc_;
  std::vector<std::string> problems_;
};

std::optional<SweepSpec> parse_sweep(Checker& ck, const std::string& key,
                                     bool integral) {
  const std::optional<std::string> s = ck.text(key);
  if (!s) return std::nullopt;
  SweepSpec spec;
  char extra = 0;
  const int got = std::sscanf(s->c_str(), " %lf , %lf , %d %c", &spec.start,
                              &spec.stop, &spec.count, &extra);
  if (got != 3) {
    ck.complain("key \"" + key + "\" must be a \"start,stop,count\" triple");
    return std::nullopt;
  }
  if (spec.count < 1) {
    ck.complain("key \"" + key + "\" needs count >= 1");
    return std::nullopt;
  }
  if (integral) {
    if (spec.start != std::floor(spec.start) ||
        spec.stop != std::floor(spec.stop) || spec.start < 0 ||
        spec.stop < spec.start) {
      ck.complain("key \"" + key +
                  "\" needs integer bounds with 0 <= start <= stop");
      return std::nullopt;
    }
    if (spec.count != static_cast<int>(spec.stop - spec.start) + 1) {
      ck.complain("key \"" + key + "\" count must equal stop - start + 1");
      return std::nullopt;
    }
  } else if (!(spec.start > 0) || !(spec.stop >= spec.start)) {
    ck.complain("key \"" + key + "\" needs 0 < start <= stop");
    return std::nullopt;
  }
  return spec;
}

}  // namespace

ModelLevel parse_model_level(const std::string& name) {
  if (name == "analytic") return ModelLevel::analytic;
  if (name == "effective") return ModelLevel::effective_numeric;
  if (name == "full") return ModelLevel::full_numeric;
  throw ConfigError("model level must be analytic, effective or full (got \"" +
                    name + "\")");
}

FidelityMode parse_fidelity_mode(const std::string& name) {
  if (name == "strict") return FidelityMode::strict;
  if (name == "global_phase") return FidelityMode::global_phase;
  if (name == "local_z") return FidelityMode::local_z;
  throw ConfigError(
      "fidelity mode must be strict, global_phase or local_z (got \"" + name +
      "\")");
}

const char* model_level_name(ModelLevel level) {
  switch (level) {
    case ModelLevel::analytic: return "analytic";
    case ModelLevel::effective_numeric: return "effective";
    case ModelLevel::full_numeric: return "full";
  }
  return "?";
}

const char* fidelity_mode_name(FidelityMode mode) {
  switch (mode) {
    case FidelityMode::strict: return "strict";
    case FidelityMode::global_phase: return "global_phase";
    case FidelityMode::local_z: return "local_z";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  Checker ck(doc);
  for (const auto& item : doc.items())
    if (!kKnownKeys.count(item.key()))
      ck.complain("unknown key \"" + item.key() + "\"");

  ExperimentConfig cfg;
  cfg.raw = text;

  if (auto v = ck.integer("n_dots")) cfg.n_dots = *v;
  cfg.omega1 = ck.number("omega1");
  if (auto v = ck.number("omega2")) cfg.omega2 = *v;
  cfg.omega3 = ck.number("omega3");
  cfg.g = ck.number("g");
  if (auto v = ck.number("delta1")) cfg.delta1 = *v;
  if (auto v = ck.number("delta2")) cfg.delta2 = *v;
  if (auto v = ck.integer("photon_cutoff")) cfg.photon_cutoff = *v;
  if (auto v = ck.integer("k")) cfg.k = *v;
  if (auto v = ck.integer("steps_per_period")) cfg.steps_per_period = *v;
  if (auto v = ck.integer("step_count")) cfg.step_count = *v;
  if (auto v = ck.number("norm_tolerance")) cfg.norm_tolerance = *v;
  if (auto v = ck.number("convergence_tol")) cfg.convergence_tol = *v;
  if (auto v = ck.number("approximation_threshold"))
    cfg.approximation_threshold = *v;
  cfg.cavity_n = ck.integer("cavity_n");
  cfg.mean_photon = ck.number("mean_photon");
  cfg.photon_range = parse_sweep(ck, "photon_range", true);
  cfg.kappa_ladder = parse_sweep(ck, "kappa_ladder", false);
  cfg.separation_ladder = parse_sweep(ck, "separation_ladder", false);

  if (auto v = ck.text("model_level")) {
    try {
      cfg.model_level = parse_model_level(*v);
    } catch (const ConfigError& e) {
      ck.complain(e.what());
    }
  }
  if (auto v = ck.text("fidelity_mode")) {
    try {
      cfg.fidelity_mode = parse_fidelity_mode(*v);
    } catch (const ConfigError& e) {
      ck.complain(e.what());
    }
  }

  // Required core.
  if (!doc.contains("omega2")) ck.complain("missing required key \"omega2\"");
  if (!doc.contains("delta1")) ck.complain("missing required key \"delta1\"");
  if (!doc.contains("delta2")) ck.complain("missing required key \"delta2\"");

  const bool has_pair = cfg.omega1.has_value() && cfg.omega3.has_value();
  if (cfg.g && (cfg.omega1 || cfg.omega3))
    ck.complain("specify either g or both omega1 and omega3, not both");
  else if (!cfg.g && !has_pair)
    ck.complain("specify either g or both omega1 and omega3");

  auto positive = [&](const char* key, std::optional<double> v) {
    if (v && !(*v > 0))
      ck.complain(std::string("key \"") + key + "\" must be > 0");
  };
  positive("omega1", cfg.omega1);
  positive("omega3", cfg.omega3);
  positive("g", cfg.g);
  if (doc.contains("omega2") && doc["omega2"].is_number() &&
      !(cfg.omega2 > 0))
    ck.complain("key \"omega2\" must be > 0");
  if (doc.contains("delta1") && doc["delta1"].is_number() &&
      !(cfg.delta1 > 0))
    ck.complain("key \"delta1\" must be > 0");
  if (doc.contains("delta2") && doc["delta2"].is_number() &&
      !(cfg.delta2 > 0))
    ck.complain("key \"delta2\" must be > 0");
  if (doc.contains("delta1") && doc.contains("delta2") &&
      doc["delta1"].is_number() && doc["delta2"].is_number() &&
      cfg.delta1 == cfg.delta2)
    ck.complain("delta1 must differ from delta2");

  if (cfg.n_dots < 1) ck.complain("key \"n_dots\" must be >= 1");
  if (cfg.photon_cutoff < 2) ck.complain("key \"photon_cutoff\" must be >= 2");
  if (cfg.k < 0) ck.complain("key \"k\" must be >= 0");
  if (cfg.steps_per_period < 1)
    ck.complain("key \"steps_per_period\" must be >= 1");
  if (cfg.step_count < 0) ck.complain("key \"step_count\" must be >= 0");
  if (!(cfg.norm_tolerance > 0))
    ck.complain("key \"norm_tolerance\" must be > 0");
  if (!(cfg.convergence_tol > 0))
    ck.complain("key \"convergence_tol\" must be > 0");
  if (!(cfg.approximation_threshold > 0))
    ck.complain("key \"approximation_threshold\" must be > 0");
  if (cfg.cavity_n && *cfg.cavity_n < 0)
    ck.complain("key \"cavity_n\" must be >= 0");
  if (cfg.mean_photon && !(*cfg.mean_photon >= 0))
    ck.complain("key \"mean_photon\" must be >= 0");
  if (cfg.cavity_n && cfg.mean_photon)
    ck.complain("cavity_n and mean_photon are mutually exclusive");

  int lab_present = 0;
  for (const std::string& key : kLabKeys) lab_present += doc.contains(key);
  if (lab_present == static_cast<int>(kLabKeys.size())) {
    LabFrequencies lab;
    auto grab = [&](const char* key, double& slot) {
      if (auto v = ck.number(key)) slot = *v;
    };
    grab("omega_up", lab.omega_up);
    grab("omega_down", lab.omega_down);
    grab("omega_v", lab.omega_v);
    grab("omega_c", lab.omega_c);
    grab("omega_l1", lab.omega_l1);
    grab("omega_l2", lab.omega_l2);
    grab("omega_l3", lab.omega_l3);
    cfg.lab = lab;
  } else if (lab_present != 0) {
    ck.complain(
        "lab frequencies must be given all together (omega_up, omega_down, "
        "omega_v, omega_c, omega_l1, omega_l2, omega_l3) or not at all");
  }

  if (!ck.problems().empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& p : ck.problems()) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

GateSchedule schedule_from_config(const ExperimentConfig& cfg) {
  GateSchedule s =
      cfg.g ? solve_schedule_fixed_g(*cfg.g, cfg.omega2, cfg.delta1,
                                     cfg.delta2, cfg.k, cfg.n_dots,
                                     cfg.photon_cutoff)
            : solve_schedule(*cfg.omega1, cfg.omega2, *cfg.omega3, cfg.delta1,
                             cfg.delta2, cfg.k, cfg.n_dots,
                             cfg.photon_cutoff);
  if (cfg.lab) {
    s.params.lab = cfg.lab;
    validate(s.params);
  }
  return s;
}

PropagationConfig propagation_from_config(const ExperimentConfig& cfg) {
  PropagationConfig prop;
  prop.scheme = Scheme::commutator_free_4;
  prop.steps_per_period = cfg.steps_per_period;
  prop.step_count = cfg.step_count;
  prop.norm_tolerance = cfg.norm_tolerance;
  return prop;
}

}  // namespace spinbus
