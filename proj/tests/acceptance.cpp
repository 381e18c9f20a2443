// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Some criteria run the full front-tracking pipeline on
// randomized perturbations; everything is seeded and deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "rarefan/config.hpp"
#include "rarefan/exports.hpp"
#include "rarefan/validate.hpp"

using namespace rarefan;

namespace {

const GasParams kAir{1.4, 1.0, 1.0};
const GasState kM2{2.0, 0.0, 1.0, 1.4};
const double kPbar = 0.5;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct BatchRun {
  double delta = 0, epsilon = 0;
  unsigned long seed = 0;
  long events = 0, audit_failures = 0, monotone_violations = 0;
  double worst_margin = 0;
  double t_np = 0;
  double runtime = 0;
  long max_fronts = 0;
  double sup_slope_dev = 0;  // sup over checkpoints of |g' - k_b|
  RegionMargins margins;
  double tv_deviation = 0;
  double measured_eps = 0;
};

ScenarioConfig batch_config(double delta, double epsilon, unsigned long seed) {
  ScenarioConfig cfg;
  cfg.gas = kAir;
  cfg.U_plus = kM2;
  cfg.p_bar = kPbar;
  cfg.delta = delta;
  cfg.delta0 = 0.05;
  cfg.x_max = 10;
  cfg.seed = seed;
  cfg.override_gates = true;
  cfg.constant_samples = 250;
  cfg.perturbation.shape = "step-train";
  cfg.perturbation.epsilon = epsilon;
  cfg.perturbation.jumps = 6;
  return cfg;
}

BatchRun run_one(const ScenarioConfig& cfg, RunHistory* keep_history = nullptr,
                 const BackgroundSolution** bg_out = nullptr) {
  static BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  if (bg_out) *bg_out = &bg;
  BatchRun out;
  out.delta = cfg.delta;
  out.epsilon = cfg.perturbation.epsilon;
  out.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  PreparedScenario sc = prepare_scenario(cfg);
  out.measured_eps = sc.profile.total_variation();
  Engine engine(sc.setup.params, sc.setup.run_weights, sc.setup.bg.S_bar);
  FrontField field = engine.initialize(sc.profile);
  RunHistory local;
  RunHistory& hist = keep_history ? *keep_history : local;
  engine.advance(field, cfg.x_max, &hist);
  out.runtime = seconds_since(t0);
  out.events = engine.events_processed();
  out.max_fronts = engine.max_front_count();
  out.t_np = np_total_strength(field);
  for (const auto& r : hist.records) {
    if (!r.audit_pass) {
      ++out.audit_failures;
      out.worst_margin = std::min(out.worst_margin, r.audit_margin);
    }
    if (r.F_after > r.F_before + 1e-12 * std::max(1.0, r.F_before)) ++out.monotone_violations;
  }
  for (const FrontField& ck : hist.checkpoints) {
    out.sup_slope_dev = std::max(out.sup_slope_dev, std::abs(ck.boundary.k - bg.k_b));
  }
  out.margins = check_invariant_region(field, kM2, cfg.delta0, kPbar, kAir);
  out.tv_deviation = tv_estimates(field, sc.setup.bg).deviation;
  return out;
}

// ---------------------------------------------------------------- criterion 1
void criterion_background() {
  const auto t0 = std::chrono::steady_clock::now();
  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  const double M_minus = oracle::isentropic_mach_at_pressure(2.0, kPbar / kM2.p, 1.4);
  const double turn = oracle::prandtl_meyer(M_minus, 1.4) - oracle::prandtl_meyer(2.0, 1.4);
  const double theta = std::atan2(bg.U_minus.v, bg.U_minus.u);
  const double rel = std::abs(std::abs(theta) - turn) / turn;

  double worst_ss = 0;
  for (int i = 1; i <= 20; ++i) {
    const double xi = bg.k2 + (bg.k1 - bg.k2) * i / 21.0;
    worst_ss = std::max(worst_ss, std::abs(eigenvalue(bg.fan_state(xi), kAir, 3) - xi));
  }
  const double dt = seconds_since(t0);
  std::ostringstream ss;
  ss << "background exactness: turning-angle rel err " << rel << ", fan self-similarity "
     << worst_ss << ", " << dt << " s";
  report(1, rel <= 1e-8 && worst_ss <= 1e-8 && dt < 1.0, ss.str());
}

// ---------------------------------------------------------------- criterion 2
void criterion_riemann() {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> ua(-0.1, 0.1);
  double worst = 0;
  int solved = 0;
  for (int i = 0; i < 1000; ++i) {
    const WaveStrengths in{ua(rng), 0.5 * ua(rng), 0.5 * ua(rng), ua(rng)};
    try {
      const GasState U_R = wave_chain(kM2, in, kAir);
      const RiemannSolution sol = solve_riemann(kM2, U_R, kAir);
      worst = std::max({worst, std::abs(sol.s.a1 - in.a1), std::abs(sol.s.a21 - in.a21),
                        std::abs(sol.s.a22 - in.a22), std::abs(sol.s.a3 - in.a3)});
      ++solved;
    } catch (const SolverError&) {
    }
  }

  const BackgroundSolution bg = background_solution(kM2, kPbar, kAir);
  std::uniform_real_distribution<double> u1(-0.05, 0.05);
  double worst_p = 0, min_kb1 = 1e300;
  int reflections = 0;
  for (int i = 0; i < 300; ++i) {
    const double a1 = u1(rng);
    if (std::abs(a1) < 1e-4) continue;
    try {
      const GasState U_r = wave_forward(bg.U_minus, {WaveFamily::F1, a1}, kAir);
      const BoundaryReflection r = solve_boundary_riemann(U_r, kPbar, kAir);
      worst_p = std::max(worst_p, std::abs(r.U_m.p - kPbar));
      min_kb1 = std::min(min_kb1, -r.beta3 / a1);
      ++reflections;
    } catch (const SolverError&) {
    }
  }
  std::ostringstream ss;
  ss << "riemann round-trips: " << solved << "/1000 solved, worst parameter err " << worst
     << "; boundary |p - p_bar| " << worst_p << ", min K_b1 " << min_kb1 << " over "
     << reflections << " reflections";
  report(2, solved == 1000 && worst <= 1e-7 && worst_p <= 1e-10 && min_kb1 > 0, ss.str());
}

// ---------------------------------------------------------------- criterion 3
void criterion_wave_curves() {
  // invariants along the rarefaction ODE, per unit parameter
  double worst_drift = 0;
  for (int fam : {1, 3}) {
    const double a = 1.0;
    const GasState R = rarefaction_forward(kM2, fam, a, kAir);
    const double sgn = fam == 3 ? 1.0 : -1.0;
    const double B0 = bernoulli(kM2, kAir), B1 = bernoulli(R, kAir);
    const double J0 = pm_integral(speed(kM2), B0, kAir) + sgn * flow_angle(kM2);
    const double J1 = pm_integral(speed(R), B1, kAir) + sgn * flow_angle(R);
    worst_drift = std::max({worst_drift, std::abs(J1 - J0) / a, std::abs(B1 - B0) / a,
                            std::abs(entropy_A(R, kAir) - entropy_A(kM2, kAir)) / a});
  }

  // Richardson order of the shock/rarefaction branch mismatch
  const double m1 = distance(shock_forward(kM2, 3, -1e-3, kAir).state,
                             rarefaction_curve_state(kM2, 3, -1e-3, kAir));
  const double m2 = distance(shock_forward(kM2, 3, -1e-4, kAir).state,
                             rarefaction_curve_state(kM2, 3, -1e-4, kAir));
  const double order = std::log10(m1 / m2);
  std::ostringstream ss;
  ss << "wave curves: invariant drift " << worst_drift << " per unit parameter, C2-contact order "
     << order << " (mismatch at 1e-4: " << m2 << ")";
  report(3, worst_drift <= 1e-9 && order >= 2.95 && m2 <= 1e-10, ss.str());
}

// ------------------------------------------------------- criteria 4, 5, 7, 8
std::vector<BatchRun> g_batch;

void criterion_glimm_monotonicity() {
  long total_events = 0, total_fail = 0, total_monotone = 0;
  double worst_margin = 0, worst_runtime = 0;
  int clean_runs = 0;
  for (int i = 0; i < 50; ++i) {
    const double delta = (i % 2 == 0) ? 0.02 : 0.01;
    const double eps = 1e-3 * std::pow(10.0, (i / 2) / 24.0);  // log-spaced in [1e-3, 1e-2]
    BatchRun r = run_one(batch_config(delta, eps, 100 + i));
    g_batch.push_back(r);
    total_events += r.events;
    total_fail += r.audit_failures;
    total_monotone += r.monotone_violations;
    worst_margin = std::min(worst_margin, r.worst_margin);
    worst_runtime = std::max(worst_runtime, r.runtime);
    clean_runs += (r.audit_failures == 0 && r.monotone_violations == 0) ? 1 : 0;
  }
  std::ostringstream ss;
  ss << "Glimm monotonicity: " << clean_runs << "/50 runs clean, " << total_fail << "/"
     << total_events << " interactions violate dF <= -E/4 (worst margin " << worst_margin
     << "), " << total_monotone << " F-increases, max runtime " << worst_runtime << " s";
  const bool pass = total_fail == 0 && total_monotone == 0 && worst_runtime < 60.0;
  report(4, pass, ss.str());
  if (!pass) {
    std::printf(
        "       note: delta_star of the small-variation weight recipe underflows at the\n"
        "       measured interaction constants (C1 ~ 5), so these runs sit far outside the\n"
        "       decrease guarantee's smallness regime; the failing events are ghost births\n"
        "       under the strong fan whose e^{K_np S} cost exceeds the capped weight drop.\n");
  }
}

void criterion_np_bound() {
  int ok = 0;
  double worst = 0;
  for (const BatchRun& r : g_batch) {
    if (r.t_np <= r.delta) ++ok;
    worst = std::max(worst, r.t_np / r.delta);
  }
  // negative control: a huge threshold forces the simplified solver everywhere
  ScenarioConfig control = batch_config(0.01, 0.01, 4242);
  control.mu_delta_override = 1.0;
  const BatchRun rc = run_one(control);
  std::ostringstream ss;
  ss << "non-physical bound: T_NP <= delta in " << ok << "/" << g_batch.size()
     << " recipe runs (worst ratio " << worst << "); negative control mu_delta = 1 gives T_NP = "
     << rc.t_np << " (delta " << rc.delta << ")";
  report(5, ok == static_cast<int>(g_batch.size()), ss.str());
}

// ---------------------------------------------------------------- criterion 6
void criterion_entropy() {
  // per-front classification plus h = O(delta^2) scaling over a delta decade
  bool classified_ok = true;
  double h_max[3];
  double weak_res[3];
  const double deltas[3] = {0.04, 0.02, 0.01};
  for (int k = 0; k < 3; ++k) {
    ScenarioConfig cfg = batch_config(deltas[k], 3e-3, 7);
    PreparedScenario sc = prepare_scenario(cfg);
    Engine engine(sc.setup.params, sc.setup.run_weights, sc.setup.bg.S_bar);
    FrontField field = engine.initialize(sc.profile);
    RunHistory hist;
    engine.advance(field, cfg.x_max, &hist);
    const EntropyReport rep =
        entropy_residuals(field, cfg.delta, sc.setup.constants.C1, kAir);
    for (const FrontEntropy& fe : rep.fronts) classified_ok = classified_ok && fe.ok;
    classified_ok = classified_ok && rep.max_contact_abs <= 1e-10 &&
                    rep.max_shock_deficit <= 1e-10;
    h_max[k] = rep.max_rarefaction_h;
    weak_res[k] = weak_residual(hist, cfg.x_max, kAir).max_residual;
  }
  const double order_h = std::log2(h_max[0] / h_max[2]) / 2.0;   // over one decade of halvings
  const double slope_w = std::log2(weak_res[0] / weak_res[2]) / 2.0;
  std::ostringstream ss;
  ss << "entropy: classification " << (classified_ok ? "clean" : "violated")
     << ", rarefaction h order " << order_h << " (h_max " << h_max[0] << " -> " << h_max[2]
     << "), weak-residual slope " << slope_w;
  report(6, classified_ok && order_h >= 1.7 && slope_w >= 0.7 && slope_w <= 1.3, ss.str());
}

// ---------------------------------------------------------------- criterion 7
void criterion_stability() {
  const double eps_list[3] = {1e-3, 3e-3, 1e-2};
  double M0[3], M1tv[3], M1reg[3];
  bool inside_fit = true;
  BatchRun runs[3];
  for (int k = 0; k < 3; ++k) {
    runs[k] = run_one(batch_config(0.01, eps_list[k], 31));
    const double eps = runs[k].measured_eps;
    M0[k] = runs[k].sup_slope_dev / eps;
    M1tv[k] = runs[k].tv_deviation / eps;
    M1reg[k] = std::max({runs[k].margins.max_dI, runs[k].margins.max_dB,
                         runs[k].margins.max_dA}) /
               eps;
  }
  auto stable = [](const double* v) {
    double lo = 1e300, hi = 0;
    for (int k = 0; k < 3; ++k) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    return hi <= 2.0 * lo;
  };
  const double M1 = std::max({M1reg[0], M1reg[1], M1reg[2]});
  for (int k = 0; k < 3; ++k) {
    const double bound = M1 * runs[k].measured_eps;
    inside_fit = inside_fit && runs[k].margins.max_dI <= bound &&
                 runs[k].margins.max_dB <= bound && runs[k].margins.max_dA <= bound;
  }
  std::ostringstream ss;
  ss << "stability: M0 = {" << M0[0] << ", " << M0[1] << ", " << M0[2] << "}, M1(TV) = {"
     << M1tv[0] << ", " << M1tv[1] << ", " << M1tv[2] << "}, M1(region) = {" << M1reg[0] << ", "
     << M1reg[1] << ", " << M1reg[2] << "}";
  report(7, stable(M0) && stable(M1tv) && stable(M1reg) && inside_fit, ss.str());
}

// ---------------------------------------------------------------- criterion 8
void criterion_finiteness() {
  long max_fronts = 0, max_events = 0;
  for (const BatchRun& r : g_batch) {
    max_fronts = std::max(max_fronts, r.max_fronts);
    max_events = std::max(max_events, r.events);
  }
  // deterministic replay: identical seed gives byte-identical event logs
  const ScenarioConfig cfg = batch_config(0.02, 5e-3, 777);
  std::string logs[2];
  for (int k = 0; k < 2; ++k) {
    RunHistory hist;
    (void)run_one(cfg, &hist);
    const std::string path = "/tmp/rarefan_replay_" + std::to_string(k) + ".jsonl";
    export_events(hist.records, path);
    std::ifstream in(path);
    logs[k].assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::remove(path.c_str());
  }
  std::ostringstream ss;
  ss << "finiteness: all 50 runs terminated at x_max = 10; max fronts " << max_fronts
     << ", max interactions " << max_events << "; replay "
     << (logs[0] == logs[1] ? "byte-identical" : "DIVERGED");
  report(8, !g_batch.empty() && logs[0] == logs[1] && !logs[0].empty(), ss.str());
}

}  // namespace

int main() {
  try {
    criterion_background();
    criterion_riemann();
    criterion_wave_curves();
    criterion_glimm_monotonicity();
    criterion_np_bound();
    criterion_entropy();
    criterion_stability();
    criterion_finiteness();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 99;
  }
  std::printf("acceptance: %d of 8 criteria failed\n", g_failures);
  return g_failures;
}
