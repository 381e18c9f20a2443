#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "rarefan/exports.hpp"
#include "rarefan/validate.hpp"

using namespace rarefan;
namespace fs = std::filesystem;

namespace {

std::string out_dir_of(const ScenarioConfig& cfg, const std::string& cli_out) {
  if (const char* env = std::getenv("RAREFAN_OUT")) return env;
  if (!cli_out.empty()) return cli_out;
  return cfg.out_dir;
}

GasState parse_state(const std::string& s) {
  GasState u;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &u.u, &u.v, &u.p, &u.rho) != 4) {
    throw SolverError(ErrorCode::ParseError, "state must be u,v,p,rho");
  }
  return u;
}

struct RunOutput {
  FrontField final_field;
  RunHistory history;
  PreparedScenario scenario;
  long events = 0;
  long max_fronts = 0;
};

RunOutput run_scenario(const ScenarioConfig& cfg) {
  RunOutput out;
  out.scenario = prepare_scenario(cfg);
  Engine engine(out.scenario.setup.params, out.scenario.setup.run_weights,
                out.scenario.setup.bg.S_bar);
  FrontField field = engine.initialize(out.scenario.profile);
  engine.advance(field, cfg.x_max, &out.history);
  out.final_field = std::move(field);
  out.events = engine.events_processed();
  out.max_fronts = engine.max_front_count();
  return out;
}

nlohmann::json summary_json(const ScenarioConfig& cfg, const RunOutput& run) {
  nlohmann::json j;
  j["x_max"] = cfg.x_max;
  j["delta"] = cfg.delta;
  j["seed"] = cfg.seed;
  j["events"] = run.events;
  j["max_fronts"] = run.max_fronts;
  j["np_total_strength"] = np_total_strength(run.final_field);
  j["mu_delta"] = run.scenario.setup.params.mu_delta;
  j["delta_star"] = run.scenario.setup.recipe_weights.delta_star;
  j["weights_fallback"] = run.scenario.setup.used_fallback;
  const Weights& w = run.scenario.setup.run_weights;
  j["weights"] = {{"K", w.K},         {"K0", w.K0},       {"K3", w.K3},
                  {"K_omega", w.K_omega}, {"K_np", w.K_np}};
  int audit_failures = 0;
  for (const auto& r : run.history.records) audit_failures += r.audit_pass ? 0 : 1;
  j["interactions"] = run.history.records.size();
  j["audit_failures"] = audit_failures;
  const EstimatedConstants& c = run.scenario.setup.constants;
  j["constants"] = {{"C0", c.C0},   {"C1", c.C1},          {"C1_prime", c.C1_prime},
                    {"C2", c.C2},   {"C_b", c.C_b},        {"samples", c.samples},
                    {"c1_commutator", c.c1_commutator},    {"c1_accurate", c.c1_accurate},
                    {"c1_regression", c.c1_regression}};
  return j;
}

int exit_code_of(const SolverError& e) {
  switch (e.code()) {
    case ErrorCode::GateViolation:
      return 2;
    case ErrorCode::AuditFailure:
      return 3;
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
      return 1;
    default:
      return 4;
  }
}

int cmd_run(const std::string& config_path, const std::string& cli_out) {
  ScenarioConfig cfg = load_config(config_path);
  const fs::path dir = out_dir_of(cfg, cli_out);
  fs::create_directories(dir);
  const RunOutput run = run_scenario(cfg);
  export_snapshot(run.final_field, (dir / "snapshot_final.csv").string());
  export_events(run.history.records, (dir / "events.jsonl").string());
  export_glimm_trace(run.history.glimm_trace, (dir / "glimm_trace.csv").string());
  export_diagram(run.history, cfg.x_max, (dir / "diagram.svg").string());
  std::ofstream s(dir / "summary.json");
  s << summary_json(cfg, run).dump(2) << '\n';
  std::cout << "run: " << run.history.records.size() << " interactions, "
            << run.max_fronts << " fronts max, T_NP = "
            << format_double(np_total_strength(run.final_field)) << '\n';
  for (const auto& g : cfg.gates.overridden) {
    std::cout << "warning: gate overridden: " << g << '\n';
  }
  return 0;
}

int cmd_background(const std::string& config_path, double x, const std::string& cli_out) {
  ScenarioConfig cfg = parse_config_text([&] {
    std::ifstream in(config_path);
    if (!in) throw SolverError(ErrorCode::IoError, "cannot open " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }());
  const BackgroundSolution bg = background_solution(cfg.U_plus, cfg.p_bar, cfg.gas);
  std::cout << "p_star = " << format_double(bg.p_star) << '\n'
            << "theta_minus = " << format_double(std::atan2(bg.U_minus.v, bg.U_minus.u)) << '\n'
            << "k_b = " << format_double(bg.k_b) << '\n'
            << "U_minus = " << format_double(bg.U_minus.u) << ' ' << format_double(bg.U_minus.v)
            << ' ' << format_double(bg.U_minus.p) << ' ' << format_double(bg.U_minus.rho) << '\n'
            << "fan edges = [" << format_double(bg.k2) << ", " << format_double(bg.k1) << "]\n"
            << "S_bar = " << format_double(bg.S_bar) << '\n'
            << "tv_constant = " << format_double(bg.tv_constant) << '\n';
  const fs::path dir = out_dir_of(cfg, cli_out);
  fs::create_directories(dir);
  // exact background field at the requested slice, split at the run accuracy
  cfg.perturbation.shape = "none";
  cfg.override_gates = true;
  PreparedScenario sc = prepare_scenario(cfg);
  Engine engine(sc.setup.params, sc.setup.run_weights, sc.setup.bg.S_bar);
  FrontField field = engine.initialize(sc.profile);
  engine.advance(field, x, nullptr);
  export_snapshot(field, (dir / "background_snapshot.csv").string());
  return 0;
}

int cmd_riemann(const std::string& ul, const std::string& ur, double gamma) {
  GasParams par;
  par.gamma = gamma;
  const GasState U_L = parse_state(ul);
  const GasState U_R = parse_state(ur);
  const RiemannSolution sol = solve_riemann(U_L, U_R, par);
  std::cout << "alpha1 = " << format_double(sol.s.a1) << '\n'
            << "alpha21 = " << format_double(sol.s.a21) << '\n'
            << "alpha22 = " << format_double(sol.s.a22) << '\n'
            << "alpha3 = " << format_double(sol.s.a3) << '\n'
            << "mid1 = " << format_double(sol.mid1.u) << ' ' << format_double(sol.mid1.v) << ' '
            << format_double(sol.mid1.p) << ' ' << format_double(sol.mid1.rho) << '\n'
            << "mid2 = " << format_double(sol.mid2.u) << ' ' << format_double(sol.mid2.v) << ' '
            << format_double(sol.mid2.p) << ' ' << format_double(sol.mid2.rho) << '\n'
            << "residual = " << format_double(sol.residual) << '\n';
  return 0;
}

int cmd_validate(const std::string& config_path, const std::string& cli_out) {
  ScenarioConfig cfg = load_config(config_path);
  const fs::path dir = out_dir_of(cfg, cli_out);
  fs::create_directories(dir);
  const RunOutput run = run_scenario(cfg);

  nlohmann::json j = summary_json(cfg, run);
  const EntropyReport er = entropy_residuals(run.final_field, cfg.delta,
                                             run.scenario.setup.constants.C1, cfg.gas);
  j["entropy"] = {{"all_ok", er.all_ok},
                  {"max_shock_deficit", er.max_shock_deficit},
                  {"max_contact_abs", er.max_contact_abs},
                  {"max_rarefaction_h", er.max_rarefaction_h},
                  {"np_h_total", er.np_h_total},
                  {"boundary_h", er.boundary_h},
                  {"boundary_exact", er.boundary_exact}};
  const WeakResidual wr = weak_residual(run.history, cfg.x_max, cfg.gas);
  j["weak_residual"] = {{"max", wr.max_residual}, {"rms", wr.rms_residual}};
  const RegionMargins rm = check_invariant_region(run.final_field, cfg.U_plus, cfg.delta0,
                                                  cfg.p_bar, cfg.gas);
  j["region"] = {{"inside", rm.inside},
                 {"max_dI", rm.max_dI},
                 {"max_dB", rm.max_dB},
                 {"max_dA", rm.max_dA},
                 {"pressure_excess", rm.pressure_excess}};
  const TvEstimates tv = tv_estimates(run.final_field, run.scenario.setup.bg);
  j["tv"] = {{"tv_p", tv.tv_p}, {"tv_p_bg", tv.tv_p_bg}, {"deviation", tv.deviation}};
  std::ofstream s(dir / "validation.json");
  s << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, std::vector<double> deltas,
              std::vector<double> epsilons, const std::string& cli_out) {
  ScenarioConfig base = load_config(config_path);
  const fs::path dir = out_dir_of(base, cli_out);
  fs::create_directories(dir);

  if (!deltas.empty()) {
    std::vector<std::future<RunOutput>> jobs;
    for (double d : deltas) {
      ScenarioConfig cfg = base;
      cfg.delta = d;
      jobs.push_back(std::async(std::launch::async, [cfg] { return run_scenario(cfg); }));
    }
    std::vector<RunOutput> runs;
    for (auto& f : jobs) runs.push_back(f.get());
    std::ofstream out(dir / "convergence.csv");
    out << "delta_coarse,delta_fine,l1_distance,boundary_slope_gap\n";
    for (size_t k = 0; k + 1 < runs.size(); ++k) {
      const double ymax = runs[k].final_field.fronts.empty()
                              ? 1.0
                              : runs[k].final_field.fronts.back().y + 1.0;
      out << format_double(deltas[k]) << ',' << format_double(deltas[k + 1]) << ','
          << format_double(
                 slice_l1_distance(runs[k].final_field, runs[k + 1].final_field, ymax))
          << ','
          << format_double(std::abs(runs[k].final_field.boundary.k -
                                    runs[k + 1].final_field.boundary.k))
          << '\n';
    }
    std::cout << "sweep: wrote " << (dir / "convergence.csv").string() << '\n';
  }
  if (!epsilons.empty()) {
    std::vector<std::future<RunOutput>> jobs;
    for (double e : epsilons) {
      ScenarioConfig cfg = base;
      cfg.perturbation.epsilon = e;
      jobs.push_back(std::async(std::launch::async, [cfg] { return run_scenario(cfg); }));
    }
    std::ofstream out(dir / "stability.csv");
    out << "epsilon,boundary_slope_dev,tv_deviation,region_dev\n";
    for (size_t k = 0; k < epsilons.size(); ++k) {
      const RunOutput r = jobs[k].get();
      const BackgroundSolution& bg = r.scenario.setup.bg;
      const TvEstimates tv = tv_estimates(r.final_field, bg);
      const RegionMargins rm = check_invariant_region(r.final_field, base.U_plus, base.delta0,
                                                      base.p_bar, base.gas);
      out << format_double(epsilons[k]) << ','
          << format_double(std::abs(r.final_field.boundary.k - bg.k_b)) << ','
          << format_double(tv.deviation) << ','
          << format_double(std::max(rm.max_dI, std::max(rm.max_dB, rm.max_dA))) << '\n';
    }
    std::cout << "sweep: wrote " << (dir / "stability.csv").string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"front-tracking simulator for supersonic flow past a convex corner"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ul, ur;
  double x_slice = 1.0, gamma = 1.4;
  std::vector<double> deltas, epsilons;

  CLI::App* run = app.add_subcommand("run", "run a scenario and export artifacts");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir);

  CLI::App* bgc = app.add_subcommand("background", "exact background solution");
  bgc->add_option("--config", config_path)->required();
  bgc->add_option("--x", x_slice);
  bgc->add_option("--out", out_dir);

  CLI::App* rie = app.add_subcommand("riemann", "one-shot Riemann solver");
  rie->add_option("--ul", ul)->required();
  rie->add_option("--ur", ur)->required();
  rie->add_option("--gamma", gamma);

  CLI::App* val = app.add_subcommand("validate", "run plus post-hoc verification");
  val->add_option("--config", config_path)->required();
  val->add_option("--out", out_dir);

  CLI::App* swp = app.add_subcommand("sweep", "delta/epsilon parameter sweeps");
  swp->add_option("--config", config_path)->required();
  swp->add_option("--deltas", deltas)->delimiter(',');
  swp->add_option("--epsilons", epsilons)->delimiter(',');
  swp->add_option("--out", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (bgc->parsed()) return cmd_background(config_path, x_slice, out_dir);
    if (rie->parsed()) return cmd_riemann(ul, ur, gamma);
    if (val->parsed()) return cmd_validate(config_path, out_dir);
    if (swp->parsed()) return cmd_sweep(config_path, deltas, epsilons, out_dir);
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_of(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
