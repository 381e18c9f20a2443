#pragma once

#include <optional>

#include "rarefan/glimm.hpp"

namespace rarefan {

// Piecewise-constant initial data: states[k] holds on (y[k-1], y[k]),
// states.back() holds above y.back() and should equal the far-field state.
struct InitialProfile {
  std::vector<double> y;
  std::vector<GasState> states;

  double total_variation() const;
};

struct EngineParams {
  GasParams gas;
  GasState U_plus;
  double p_bar = 0.5;
  double delta = 0.01;   // front accuracy
  double delta0 = 0.05;  // perturbation-region size
  double eps0 = 0.05;    // admissible initial total variation
  double mu_delta = 1e-4;
  double lambda_hat = 1.0;
  double lambda1_star = 0, lambda3_star = 0;
  double tie_tol = 1e-12;
  double tie_bump = 1e-10;
  long max_events = 200000;
  bool audit_strict = false;  // abort on audit failure instead of recording it
};

struct Participants {
  bool boundary = false;
  long lower = -1;  // front id (or the only front when boundary)
  long upper = -1;
};

struct NextInteraction {
  double x = 0;  // +inf when none
  Participants who;
};

struct CaseInfo {
  int icase = 0;
  double E_delta = 0;
};

// Snapshot of the field plus functional at a checkpoint, for histories.
struct RunHistory {
  std::vector<FrontField> checkpoints;  // at x = 0+ and after every interaction
  std::vector<InteractionRecord> records;
  std::vector<GlimmSnapshot> glimm_trace;
};

int assign_generation_order(int out_family, int fam_i, int k1, int fam_j, int k2);

// Recipe of the non-physical threshold; empty geometric sum falls back to the
// configured cap delta^2.
double mu_delta_recipe(double delta, const EstimatedConstants& c, double delta_star);

class Engine {
 public:
  Engine(const EngineParams& params, const Weights& weights, double S_bar_reference);

  FrontField initialize(const InitialProfile& profile) const;

  NextInteraction next_interaction(const FrontField& field) const;
  CaseInfo classify_case(const FrontField& field, const Participants& who) const;
  static bool use_accurate(const CaseInfo& info, double mu_delta);

  // Processes interactions in increasing x until x_stop (inclusive); the field
  // becomes the right-limit at x_stop. Appends to the history when given.
  void advance(FrontField& field, double x_stop, RunHistory* history = nullptr);

  const EngineParams& params() const { return params_; }
  const Weights& weights() const { return weights_; }
  double S_bar() const { return S_bar_; }
  long events_processed() const { return events_; }
  long max_front_count() const { return max_fronts_; }

 private:
  void resolve(FrontField& field, const Participants& who, const CaseInfo& info, bool accurate,
               RunHistory* history);
  long place_fronts(FrontField& field, size_t at, std::vector<Front>&& newly);

  EngineParams params_;
  Weights weights_;
  double S_bar_ = 0;
  mutable long next_id_ = 1;
  long events_ = 0;
  long max_fronts_ = 0;
};

// Convenience wrapper: background + constants + weights + engine for a scenario.
struct RunSetup {
  BackgroundSolution bg;
  EstimatedConstants constants;
  Weights recipe_weights;   // verbatim chain (may be non-finite)
  Weights run_weights;      // weights actually used
  bool used_fallback = false;
  EngineParams params;
};

RunSetup prepare_run(const GasState& U_plus, double p_bar, double delta, double delta0,
                     double L0_bound, int constant_samples, unsigned long seed,
                     const GasParams& par);

}  // namespace rarefan
