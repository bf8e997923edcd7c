#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinbus/config.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Raman-driven dot-cavity gate simulator: solves gate schedules and "
      "runs named experiments from a flat JSON config"};
  app.name("spinbus");

  std::string experiment, config_path, model, out_path, format;
  bool strict = false;

  app.add_option("experiment", experiment,
                 "one of: params, truth-table, photon-sweep, compare, "
                 "parallel, decoherence, single-qubit")
      ->required();
  app.add_option("--config", config_path, "path to the JSON config")
      ->required();
  app.add_option("--model", model, "model level override")
      ->check(CLI::IsMember({"analytic", "effective", "full"}));
  app.add_flag("--strict", strict,
               "treat approximation warnings as errors (exit 2)");
  app.add_option("--out", out_path, "output data path (manifest sidecar "
                                    "<out>.manifest.json)");
  app.add_option("--format", format, "output format (must match the "
                                     "experiment's native format)")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    spinbus::ExperimentConfig cfg = spinbus::parse_config(config_path);
    if (!model.empty()) cfg.model_level = spinbus::parse_model_level(model);
    const spinbus::ExperimentResult res =
        spinbus::run_experiment(experiment, cfg, strict, out_path, format);
    if (res.exit_code == 0)
      std::cout << res.message << "\n";
    else
      std::cerr << res.message << "\n";
    return res.exit_code;
  } catch (const spinbus::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const spinbus::InfeasibleError& e) {
    std::cerr << "infeasible request: " << e.what() << "\n";
    return 1;
  } catch (const spinbus::DomainError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 1;
  } catch (const spinbus::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
