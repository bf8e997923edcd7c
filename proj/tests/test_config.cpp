#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "spinbus/config.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/gates.hpp"

using namespace spinbus;

namespace {

std::string parse_problems(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kReferenceDoc = R"({
  "omega1": 1.0, "omega2": 1.0, "omega3": 1.0,
  "delta1": 10.0, "delta2": 5.0,
  "k": 5, "photon_cutoff": 9
})";

}  // namespace

TEST_CASE("reference document parses with defaults intact") {
  const ExperimentConfig cfg = parse_config_text(kReferenceDoc);
  CHECK(cfg.n_dots == 2);
  REQUIRE(cfg.omega1.has_value());
  CHECK(*cfg.omega1 == 1.0);
  CHECK(cfg.omega2 == 1.0);
  CHECK(cfg.delta1 == 10.0);
  CHECK(cfg.delta2 == 5.0);
  CHECK(cfg.k == 5);
  CHECK(cfg.photon_cutoff == 9);
  CHECK_FALSE(cfg.g.has_value());
  CHECK(cfg.model_level == ModelLevel::effective_numeric);
  CHECK(cfg.fidelity_mode == FidelityMode::local_z);
  CHECK(cfg.steps_per_period == 2000);
  CHECK(cfg.step_count == 0);
  CHECK(cfg.norm_tolerance == 1e-9);
  CHECK(cfg.convergence_tol == 1e-8);
  CHECK(cfg.approximation_threshold == 0.2);
  CHECK_FALSE(cfg.cavity_n.has_value());
  CHECK_FALSE(cfg.mean_photon.has_value());
  CHECK_FALSE(cfg.lab.has_value());
  CHECK(cfg.raw == std::string(kReferenceDoc));
}

TEST_CASE("enumerated names map to levels and modes") {
  ExperimentConfig cfg = parse_config_text(R"({
    "g": 0.7619, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
    "model_level": "full", "fidelity_mode": "strict"
  })");
  CHECK(cfg.model_level == ModelLevel::full_numeric);
  CHECK(cfg.fidelity_mode == FidelityMode::strict);

  CHECK(parse_model_level("analytic") == ModelLevel::analytic);
  CHECK(parse_model_level("effective") == ModelLevel::effective_numeric);
  CHECK(std::string(model_level_name(ModelLevel::full_numeric)) == "full");
  CHECK(std::string(fidelity_mode_name(FidelityMode::global_phase)) ==
        "global_phase");
  CHECK_THROWS_AS(parse_model_level("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_fidelity_mode("loose"), ConfigError);

  const std::string msg = parse_problems(R"({
    "g": 0.7619, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
    "model_level": "bogus"
  })");
  CHECK(msg.find("model level must be analytic, effective or full") !=
        std::string::npos);
}

TEST_CASE("schema violations are aggregated into one report") {
  const std::string msg = parse_problems(R"({
    "banana": 3,
    "omega1": 1.0, "omega3": 1.0,
    "omega2": -1.0, "delta1": 5.0, "delta2": 5.0,
    "photon_cutoff": 1
  })");
  CHECK(msg.find("invalid configuration:") == 0);
  CHECK(msg.find("unknown key \"banana\"") != std::string::npos);
  CHECK(msg.find("key \"omega2\" must be > 0") != std::string::npos);
  CHECK(msg.find("delta1 must differ from delta2") != std::string::npos);
  CHECK(msg.find("key \"photon_cutoff\" must be >= 2") != std::string::npos);
  CHECK(msg.find("\n  - ") != std::string::npos);
}

TEST_CASE("drive specification is exclusive-or") {
  CHECK(parse_problems(R"({
          "g": 0.76, "omega1": 1.0, "omega3": 1.0,
          "omega2": 1.0, "delta1": 10.0, "delta2": 5.0
        })")
            .find("specify either g or both omega1 and omega3, not both") !=
        std::string::npos);
  CHECK(parse_problems(R"({
          "omega2": 1.0, "delta1": 10.0, "delta2": 5.0
        })")
            .find("specify either g or both omega1 and omega3") !=
        std::string::npos);
  CHECK(parse_problems(R"({
          "omega1": 1.0,
          "omega2": 1.0, "delta1": 10.0, "delta2": 5.0
        })")
            .find("specify either g or both omega1 and omega3") !=
        std::string::npos);

  const std::string missing = parse_problems(R"({"g": 0.76})");
  CHECK(missing.find("missing required key \"omega2\"") != std::string::npos);
  CHECK(missing.find("missing required key \"delta1\"") != std::string::npos);
  CHECK(missing.find("missing required key \"delta2\"") != std::string::npos);
}

TEST_CASE("cavity preparation keys are mutually exclusive") {
  CHECK(parse_problems(R"({
          "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
          "cavity_n": 1, "mean_photon": 0.5
        })")
            .find("cavity_n and mean_photon are mutually exclusive") !=
        std::string::npos);
  const ExperimentConfig cfg = parse_config_text(R"({
    "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
    "mean_photon": 1.0
  })");
  REQUIRE(cfg.mean_photon.has_value());
  CHECK(*cfg.mean_photon == 1.0);
}

TEST_CASE("sweep triples") {
  ExperimentConfig cfg = parse_config_text(R"({
    "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
    "photon_range": "0,4,5",
    "kappa_ladder": "0.008,0.066,5",
    "separation_ladder": "0.025,0.4,5"
  })");
  REQUIRE(cfg.photon_range.has_value());
  CHECK(cfg.photon_range->start == 0.0);
  CHECK(cfg.photon_range->stop == 4.0);
  CHECK(cfg.photon_range->count == 5);
  REQUIRE(cfg.kappa_ladder.has_value());
  CHECK(cfg.kappa_ladder->count == 5);

  auto bad = [](const char* body) {
    return parse_problems(std::string(R"({
      "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,)") + body +
                          "}");
  };
  CHECK(bad(R"("photon_range": "0,4,3")")
            .find("count must equal stop - start + 1") != std::string::npos);
  CHECK(bad(R"("photon_range": "2.5,4.5,3")")
            .find("integer bounds") != std::string::npos);
  CHECK(bad(R"("photon_range": "0,4")")
            .find("must be a \"start,stop,count\" triple") !=
        std::string::npos);
  CHECK(bad(R"("kappa_ladder": "-1,1,3")")
            .find("needs 0 < start <= stop") != std::string::npos);
  CHECK(bad(R"("kappa_ladder": 7)")
            .find("key \"kappa_ladder\" must be a string") !=
        std::string::npos);
  CHECK(bad(R"("photon_range": "4,2,3")")
            .find("0 <= start <= stop") != std::string::npos);
}

TEST_CASE("lab frequencies arrive together or not at all") {
  CHECK(parse_problems(R"({
          "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
          "omega_up": 1000.0
        })")
            .find("lab frequencies must be given all together") !=
        std::string::npos);

  const ExperimentConfig cfg = parse_config_text(R"({
    "omega1": 1.0, "omega2": 1.0, "omega3": 1.0,
    "delta1": 10.0, "delta2": 5.0, "k": 5,
    "omega_up": 1000.0, "omega_down": 999.0, "omega_v": 0.0,
    "omega_c": 988.9238095238095,
    "omega_l1": 995.0, "omega_l2": 990.0, "omega_l3": 994.0
  })");
  REQUIRE(cfg.lab.has_value());
  CHECK(cfg.lab->omega_up == 1000.0);
  CHECK(cfg.lab->omega_c == 988.9238095238095);
}

TEST_CASE("schedules derived from configs") {
  SUBCASE("drive pair given, coupling solved") {
    const ExperimentConfig cfg = parse_config_text(kReferenceDoc);
    const GateSchedule s = schedule_from_config(cfg);
    REQUIRE(s.g_required.has_value());
    CHECK(*s.g_required == doctest::Approx(0.764796241077076).epsilon(1e-12));
    CHECK_FALSE(s.omega_product_required.has_value());
    CHECK(s.params.photon_cutoff == 9);
  }

  SUBCASE("coupling given, drive product solved") {
    const ExperimentConfig cfg = parse_config_text(R"({
      "g": 0.761904761904762, "omega2": 1.0,
      "delta1": 10.0, "delta2": 5.0, "k": 5
    })");
    const GateSchedule s = schedule_from_config(cfg);
    REQUIRE(s.omega_product_required.has_value());
    CHECK(s.params.omega1 ==
          doctest::Approx(std::sqrt(*s.omega_product_required))
              .epsilon(1e-12));
    CHECK(s.params.g == 0.761904761904762);
  }

  SUBCASE("consistent lab frequencies ride along") {
    const ExperimentConfig cfg = parse_config_text(R"({
      "omega1": 1.0, "omega2": 1.0, "omega3": 1.0,
      "delta1": 10.0, "delta2": 5.0, "k": 5,
      "omega_up": 1000.0, "omega_down": 999.0, "omega_v": 0.0,
      "omega_c": 988.9238095238095,
      "omega_l1": 995.0, "omega_l2": 990.0, "omega_l3": 994.0
    })");
    const GateSchedule s = schedule_from_config(cfg);
    REQUIRE(s.params.lab.has_value());
    CHECK(s.params.lab->omega_l2 == 990.0);
  }

  SUBCASE("inconsistent lab frequencies are refused") {
    const ExperimentConfig cfg = parse_config_text(R"({
      "omega1": 1.0, "omega2": 1.0, "omega3": 1.0,
      "delta1": 10.0, "delta2": 5.0, "k": 5,
      "omega_up": 1000.0, "omega_down": 999.0, "omega_v": 0.0,
      "omega_c": 988.5,
      "omega_l1": 995.0, "omega_l2": 990.0, "omega_l3": 994.0
    })");
    CHECK_THROWS_AS(schedule_from_config(cfg), DomainError);
  }
}

TEST_CASE("propagation settings are forwarded") {
  const ExperimentConfig cfg = parse_config_text(R"({
    "g": 0.76, "omega2": 1.0, "delta1": 10.0, "delta2": 5.0,
    "steps_per_period": 777, "step_count": 12, "norm_tolerance": 1e-7
  })");
  const PropagationConfig prop = propagation_from_config(cfg);
  CHECK(prop.steps_per_period == 777);
  CHECK(prop.step_count == 12);
  CHECK(prop.norm_tolerance == 1e-7);
  CHECK(prop.scheme == Scheme::commutator_free_4);
}

TEST_CASE("config files and malformed documents") {
  CHECK_THROWS_AS(parse_config("definitely-missing.json"), ConfigError);
  CHECK(parse_problems("{") .find("config is not valid JSON") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);

  const char* path = "test_config_roundtrip.json";
  {
    std::ofstream out(path);
    out << kReferenceDoc;
  }
  const ExperimentConfig cfg = parse_config(path);
  CHECK(cfg.delta1 == 10.0);
  CHECK(cfg.raw == std::string(kReferenceDoc));
  std::remove(path);
}
