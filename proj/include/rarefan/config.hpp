#pragma once

#include <map>
#include <random>
#include <string>

#include "rarefan/tracking.hpp"

namespace rarefan {

struct PerturbationSpec {
  std::string shape = "step-train";  // step-train | single-bump | table | none
  double epsilon = 0;                // target total variation
  int jumps = 6;                     // step-train only
  double y0 = 0.5;                   // lowest jump position
  double width = 2.0;                // band of the perturbation
  std::vector<double> table_y;
  std::vector<GasState> table_states;
};

struct GateReport {
  double p_star = 0;
  double delta_star = 0;
  double mu_delta = 0;
  bool recipe_finite = true;
  std::vector<std::string> weight_violations;
  std::vector<std::string> overridden;  // gates bypassed by the override flag
};

struct ScenarioConfig {
  GasParams gas;
  GasState U_plus{2, 0, 1, 1.4};
  double p_bar = 0.5;
  double rho_bar = 0;  // 0: isentropic extension of the corner state
  double delta = 0.01;
  double delta0 = 0.05;
  double eps0 = 0.05;
  PerturbationSpec perturbation;
  double x_max = 10;
  unsigned long seed = 1;
  bool audit_strict = false;
  bool override_gates = false;
  int constant_samples = 400;
  double mu_delta_override = -1;                 // < 0: recipe value
  std::map<std::string, double> weight_overrides;
  std::string out_dir = ".";

  GateReport gates;  // filled by load_config / check_gates
};

ScenarioConfig parse_config_text(const std::string& text);
// Parses, computes the derived gates (p_*, delta_*, mu_delta) and enforces
// them; named GateViolation unless the override flag is set.
ScenarioConfig load_config(const std::string& path);
void check_gates(ScenarioConfig& cfg);

InitialProfile make_profile(const ScenarioConfig& cfg, std::mt19937_64& rng);

// Everything needed to run one scenario deterministically.
struct PreparedScenario {
  ScenarioConfig cfg;
  RunSetup setup;
  InitialProfile profile;
};

PreparedScenario prepare_scenario(const ScenarioConfig& cfg);

}  // namespace rarefan
