// Calibration probe: recomputes every frozen regression value so the pins in
// the test suites can be re-measured after an integrator or model change.
// Build with the `probe` target; not part of the default build.
#include <cstdio>

#include "spinbus/gates.hpp"

using namespace spinbus;

int main() {
  {
    const GateSchedule s = solve_schedule(1, 1, 1, 10, 5, 5, 2, 5);
    PropagationConfig cfg;
    cfg.steps_per_period = 400;
    const GateReport r = run_cz(s, ModelLevel::effective_numeric,
                                CavitySpec::fock(0), FidelityMode::local_z,
                                cfg);
    std::printf("two-level stepped regression (cutoff 5, spp 400):\n"
                "  F=%.12f leakage=%.6e\n",
                r.avg_fidelity, r.leakage);
  }
  {
    const GateSchedule s = solve_schedule(1, 1, 1, 10, 5, 5, 2, 6);
    PropagationConfig cfg;
    for (int spp : {4000, 8000}) {
      cfg.steps_per_period = spp;
      const GateReport r = run_cz(s, ModelLevel::full_numeric,
                                  CavitySpec::fock(0), FidelityMode::local_z,
                                  cfg);
      std::printf("three-level reference point (cutoff 6, spp %d):\n"
                  "  F=%.9f leakage=%.9f leakage_valence=%.9f\n",
                  spp, r.avg_fidelity, r.leakage, r.leakage_valence);
    }
    GateSchedule wide = s;
    wide.params = rescale_detunings(s.params, 2.0);
    cfg.steps_per_period = 2000;
    const GateReport r = run_cz(wide, ModelLevel::full_numeric,
                                CavitySpec::fock(0), FidelityMode::local_z,
                                cfg);
    std::printf("three-level widened detunings (lambda 2, spp 2000):\n"
                "  F=%.9f leakage_valence=%.9f\n",
                r.avg_fidelity, r.leakage_valence);
  }
  {
    const double kp = kHbarMevPs / 10.0;
    PropagationConfig cfg;
    cfg.steps_per_period = 4000;
    std::printf("zero-loss truncation scan (spp 4000):\n");
    for (int cutoff : {6, 10, 12, 14}) {
      const GateSchedule s = solve_schedule(1, 1, 1, 10, 5, 5, 2, cutoff);
      const auto scan = decoherence_scan(s, {0.0, kp}, cfg);
      std::printf("  cutoff %2d: |1-F(0)|=%.3e tau(kappa_p)=%.4f ps\n", cutoff,
                  std::abs(1.0 - scan[0].fidelity), scan[1].tau_eff_ps);
    }
  }
  return 0;
}
