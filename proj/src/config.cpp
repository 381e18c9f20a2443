#include "rarefan/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rarefan {

namespace {

using nlohmann::json;

GasState state_from(const json& j) {
  if (j.is_array()) {
    if (j.size() != 4) throw SolverError(ErrorCode::ParseError, "state needs [u,v,p,rho]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  }
  GasState s;
  s.u = j.at("u").get<double>();
  s.v = j.value("v", 0.0);
  s.p = j.at("p").get<double>();
  s.rho = j.at("rho").get<double>();
  return s;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SolverError(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    cfg.gas.gamma = j.value("gamma", 1.4);
    cfg.gas.kappa = j.value("kappa", 1.0);
    cfg.gas.c_v = j.value("c_v", 1.0);
    if (j.contains("U_plus")) cfg.U_plus = state_from(j["U_plus"]);
    cfg.p_bar = j.value("p_bar", 0.5);
    cfg.rho_bar = j.value("rho_bar", 0.0);
    cfg.delta = j.value("delta", 0.01);
    cfg.delta0 = j.value("delta0", 0.05);
    cfg.eps0 = j.value("eps0", 0.05);
    cfg.x_max = j.value("x_max", 10.0);
    cfg.seed = j.value("seed", 1UL);
    cfg.audit_strict = j.value("audit_strict", false);
    cfg.override_gates = j.value("override_gates", false);
    cfg.constant_samples = j.value("constant_samples", 400);
    cfg.mu_delta_override = j.value("mu_delta", -1.0);
    cfg.out_dir = j.value("out_dir", std::string("."));
    if (j.contains("weights")) {
      for (auto& [k, v] : j["weights"].items()) cfg.weight_overrides[k] = v.get<double>();
    }
    if (j.contains("perturbation")) {
      const json& p = j["perturbation"];
      cfg.perturbation.shape = p.value("shape", std::string("step-train"));
      cfg.perturbation.epsilon = p.value("epsilon", 0.0);
      cfg.perturbation.jumps = p.value("jumps", 6);
      cfg.perturbation.y0 = p.value("y0", 0.5);
      cfg.perturbation.width = p.value("width", 2.0);
      if (p.contains("table_y")) {
        for (const auto& y : p["table_y"]) cfg.perturbation.table_y.push_back(y.get<double>());
        for (const auto& s : p["table_states"]) {
          cfg.perturbation.table_states.push_back(state_from(s));
        }
      }
    }
  } catch (const json::exception& e) {
    throw SolverError(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (cfg.gas.gamma <= 1.0) throw SolverError(ErrorCode::ParseError, "config: gamma must be > 1");
  return cfg;
}

void check_gates(ScenarioConfig& cfg) {
  if (!(cfg.p_bar < cfg.U_plus.p)) {
    throw SolverError(ErrorCode::GateViolation, "p_bar < p_plus");
  }
  if (!is_supersonic(cfg.U_plus, cfg.gas)) {
    throw SolverError(ErrorCode::GateViolation, "u_plus > c_plus");
  }
  const BackgroundSolution bg = background_solution(cfg.U_plus, cfg.p_bar, cfg.gas);
  cfg.gates.p_star = bg.p_star;
  if (!(cfg.p_bar > bg.p_star)) {
    throw SolverError(ErrorCode::GateViolation, "p_bar > p_star (Lemma 2.1 range)");
  }

  const EstimatedConstants consts = estimate_constants(cfg.U_plus, cfg.p_bar, cfg.delta0,
                                                       cfg.constant_samples, cfg.seed, cfg.gas);
  const Weights recipe = Weights::small_tv_recipe(consts);
  cfg.gates.delta_star = recipe.delta_star;
  cfg.gates.recipe_finite = recipe.finite();
  cfg.gates.mu_delta = cfg.mu_delta_override >= 0
                           ? cfg.mu_delta_override
                           : mu_delta_recipe(cfg.delta, consts, recipe.delta_star);
  if (!(cfg.delta < recipe.delta_star)) {
    if (!cfg.override_gates) {
      throw SolverError(ErrorCode::GateViolation,
                        "delta < delta_star (accuracy gate): computed delta_star = " +
                            std::to_string(recipe.delta_star));
    }
    cfg.gates.overridden.push_back("delta < delta_star (accuracy gate)");
  }
  cfg.gates.weight_violations = recipe.finite()
                                    ? recipe.verify(recipe.delta_star, cfg.delta)
                                    : std::vector<std::string>{"weights not finite"};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::IoError, "config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ScenarioConfig cfg = parse_config_text(ss.str());
  check_gates(cfg);
  return cfg;
}

namespace {

InitialProfile step_train(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const int n = std::max(1, cfg.perturbation.jumps);
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  // build downward from the far field with random weak waves, then rescale to
  // meet the requested total variation
  std::vector<WaveParam> waves(n);
  for (WaveParam& w : waves) {
    const int fam = static_cast<int>(rng() % 3);
    const double s = mag(rng) * (uni(rng) < 0.5 ? -1.0 : 1.0);
    if (fam == 0) {
      w.family = WaveFamily::F1;
      w.alpha = s;
    } else if (fam == 2) {
      w.family = WaveFamily::F3;
      w.alpha = s;
    } else {
      w.family = WaveFamily::F2Vortex;
      const double split = uni(rng);
      w.alpha = split * s;
      w.alpha22 = (1.0 - split) * s;
    }
  }
  double scale = cfg.perturbation.epsilon / n;
  InitialProfile prof;
  for (int pass = 0; pass < 3; ++pass) {
    prof.states.assign(1, cfg.U_plus);
    for (const WaveParam& w : waves) {
      WaveParam ws = w;
      ws.alpha *= scale;
      ws.alpha22 *= scale;
      prof.states.push_back(wave_inverse(prof.states.back(), ws, cfg.gas));
    }
    std::reverse(prof.states.begin(), prof.states.end());
    const double tv = prof.total_variation();
    if (std::abs(tv - cfg.perturbation.epsilon) < 1e-3 * cfg.perturbation.epsilon) break;
    scale *= cfg.perturbation.epsilon / tv;
  }
  prof.y.resize(n);
  for (int k = 0; k < n; ++k) {
    prof.y[k] = cfg.perturbation.y0 + cfg.perturbation.width * (k + 0.5) / n;
  }
  return prof;
}

InitialProfile single_bump(const ScenarioConfig& cfg) {
  // flow-angle bump discretized into equal steps; vortex-sheet parameters keep
  // the states supersonic for small epsilon
  const int m = 12;
  InitialProfile prof;
  std::vector<double> a21(m);
  double tv_unit = 0;
  for (int k = 0; k < m; ++k) {
    const double t0 = -1.0 + 2.0 * k / m;
    const double t1 = -1.0 + 2.0 * (k + 1) / m;
    const double b0 = std::exp(-1.0 / std::max(1e-12, 1.0 - t0 * t0)) * (std::abs(t0) < 1 ? 1 : 0);
    const double b1 = std::exp(-1.0 / std::max(1e-12, 1.0 - t1 * t1)) * (std::abs(t1) < 1 ? 1 : 0);
    a21[k] = b1 - b0;
    tv_unit += std::abs(a21[k]);
  }
  const double scale = cfg.perturbation.epsilon / (tv_unit * speed(cfg.U_plus));
  prof.states.assign(1, cfg.U_plus);
  for (int k = m - 1; k >= 0; --k) {
    prof.states.push_back(contact_forward(prof.states.back(), -a21[k] * scale, 0.0));
  }
  std::reverse(prof.states.begin(), prof.states.end());
  prof.y.resize(m);
  for (int k = 0; k < m; ++k) {
    prof.y[k] = cfg.perturbation.y0 + cfg.perturbation.width * (k + 0.5) / m;
  }
  return prof;
}

}  // namespace

InitialProfile make_profile(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  InitialProfile prof;
  if (cfg.perturbation.shape == "none" || cfg.perturbation.epsilon == 0) {
    prof.states = {cfg.U_plus};
    return prof;
  }
  if (cfg.perturbation.shape == "step-train") return step_train(cfg, rng);
  if (cfg.perturbation.shape == "single-bump") return single_bump(cfg);
  if (cfg.perturbation.shape == "table") {
    prof.y = cfg.perturbation.table_y;
    prof.states = cfg.perturbation.table_states;
    return prof;
  }
  throw SolverError(ErrorCode::ParseError, "unknown perturbation shape " + cfg.perturbation.shape);
}

PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
  PreparedScenario out;
  out.cfg = cfg;
  std::mt19937_64 rng(cfg.seed);
  out.profile = make_profile(cfg, rng);
  const double L0_bound = std::max(out.profile.total_variation(), 1e-6);
  out.setup = prepare_run(cfg.U_plus, cfg.p_bar, cfg.delta, cfg.delta0, L0_bound,
                          cfg.constant_samples, cfg.seed, cfg.gas);
  out.setup.params.eps0 = cfg.eps0;
  out.setup.params.audit_strict = cfg.audit_strict;
  if (cfg.mu_delta_override >= 0) out.setup.params.mu_delta = cfg.mu_delta_override;
  for (const auto& [name, value] : cfg.weight_overrides) {
    Weights& w = out.setup.run_weights;
    if (name == "K") w.K = value;
    else if (name == "K0") w.K0 = value;
    else if (name == "K1") w.K1 = value;
    else if (name == "K2") w.K2 = value;
    else if (name == "K3") w.K3 = value;
    else if (name == "K4") w.K4 = value;
    else if (name == "K_omega") w.K_omega = value;
    else if (name == "K_np") w.K_np = value;
    else if (name == "K_star") w.K_star = value;
    else throw SolverError(ErrorCode::ParseError, "unknown weight override " + name);
  }
  return out;
}

}  // namespace rarefan
