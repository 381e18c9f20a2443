#include "rarefan/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rarefan {

double InitialProfile::total_variation() const {
  double tv = 0;
  for (size_t k = 0; k + 1 < states.size(); ++k) tv += distance(states[k], states[k + 1]);
  return tv;
}

int assign_generation_order(int out_family, int fam_i, int k1, int fam_j, int k2) {
  if (out_family == fam_i && out_family == fam_j) return std::min(k1, k2);
  if (out_family == fam_i) return k1;
  if (out_family == fam_j) return k2;
  return k1 + k2;
}

double mu_delta_recipe(double delta, const EstimatedConstants& c, double delta_star) {
  const double cap = delta * delta;
  const double r = c.C2 * delta_star;
  if (r >= 1.0) {
    throw SolverError(ErrorCode::ConstantsInvalid, "mu_delta: C2 * delta_star >= 1");
  }
  int k0 = 1;
  while (c.C1 * std::pow(r, k0) / (1.0 - r) > 0.5 * delta) {
    if (++k0 > 1000) throw SolverError(ErrorCode::ConstantsInvalid, "mu_delta: k0 diverges");
  }
  if (k0 == 1) return cap;
  double sum = 0;
  const double q = 3.0 * delta_star / delta;
  for (int m = 1; m <= k0 - 1; ++m) sum += std::pow(q, 2 * m - 1);
  const double mu = 0.5 * delta / (c.C2 * c.C1 * sum);
  return std::min(mu, cap);
}

namespace {

void set_strong_flag(Front& f) {
  f.is_strong = (f.family == 3 && f.kind == FrontKind::Rarefaction && f.gen_order == 0);
}

Front from_proto(const ProtoFront& p, double y, long id, int gen_order) {
  Front f;
  f.id = id;
  f.family = p.family;
  f.kind = p.kind;
  f.y = y;
  f.speed = p.speed;
  f.below = p.below;
  f.above = p.above;
  f.alpha = p.alpha;
  f.alpha2 = p.alpha2;
  f.gen_order = gen_order;
  set_strong_flag(f);
  return f;
}

void move_field(FrontField& field, double x) {
  const double dx = x - field.x;
  if (dx == 0) return;
  for (Front& f : field.fronts) f.y += f.speed * dx;
  field.boundary.y += field.boundary.k * dx;
  field.x = x;
}

WaveParam param_of(const Front& f) {
  WaveParam w;
  if (f.family == 1) {
    w.family = WaveFamily::F1;
    w.alpha = f.alpha;
  } else if (f.family == 3) {
    w.family = WaveFamily::F3;
    w.alpha = f.alpha;
  } else {
    w.family = WaveFamily::F2Vortex;
    w.alpha = f.alpha;
    w.alpha22 = f.alpha2;
  }
  return w;
}

}  // namespace

Engine::Engine(const EngineParams& params, const Weights& weights, double S_bar_reference)
    : params_(params), weights_(weights), S_bar_(S_bar_reference) {}

FrontField Engine::initialize(const InitialProfile& profile) const {
  if (profile.states.empty()) {
    throw SolverError(ErrorCode::ParseError, "initialize: empty profile");
  }
  if (profile.y.size() + 1 != profile.states.size()) {
    throw SolverError(ErrorCode::ParseError, "initialize: jump/state count mismatch");
  }
  for (size_t k = 0; k + 1 < profile.y.size(); ++k) {
    if (!(profile.y[k] < profile.y[k + 1])) {
      throw SolverError(ErrorCode::ParseError, "initialize: jumps not increasing");
    }
  }
  if (profile.total_variation() > params_.eps0) {
    throw SolverError(ErrorCode::TVTooLarge, "initialize: profile TV exceeds eps0");
  }
  for (const GasState& s : profile.states) require_supersonic(s, params_.gas, "initialize");

  FrontField field;
  field.x = 0;
  field.top_state = profile.states.back();

  // corner: free-boundary Riemann problem with the strong fan, all order 0
  const GasState bottom = profile.states.front();
  const BackgroundSolution bgl = background_solution(bottom, params_.p_bar, params_.gas);
  field.boundary.y = 0;
  field.boundary.k = bgl.k_b;
  const double rho_bar = std::pow(params_.p_bar / entropy_A(bottom, params_.gas),
                                  1.0 / params_.gas.gamma);
  field.boundary.static_gas = {0, 0, params_.p_bar, rho_bar};

  auto fan = split_rarefaction(bgl.U_minus, 3, bgl.S_bar, params_.delta, params_.gas);
  if (!fan.empty()) fan.back().above = bottom;
  for (const ProtoFront& p : fan) field.fronts.push_back(from_proto(p, 0.0, next_id_++, 0));

  // interior jumps: accurate solves, order 1
  for (size_t k = 0; k < profile.y.size(); ++k) {
    auto fronts = accurate_solver(profile.states[k], profile.states[k + 1], params_.delta,
                                  params_.gas);
    for (const ProtoFront& p : fronts) {
      field.fronts.push_back(from_proto(p, profile.y[k], next_id_++, 1));
    }
  }
  return field;
}

NextInteraction Engine::next_interaction(const FrontField& field) const {
  NextInteraction best;
  best.x = std::numeric_limits<double>::infinity();
  if (field.fronts.empty()) return best;

  // boundary against the lowest front
  {
    const Front& f = field.fronts.front();
    if (f.speed < field.boundary.k) {
      const double gap = f.y - field.boundary.y;
      const double x = field.x + gap / (field.boundary.k - f.speed);
      if (x < best.x) {
        best.x = x;
        best.who = {true, f.id, -1};
      }
    }
  }
  for (size_t k = 0; k + 1 < field.fronts.size(); ++k) {
    const Front& lo = field.fronts[k];
    const Front& hi = field.fronts[k + 1];
    if (lo.speed <= hi.speed) continue;
    const double x = field.x + (hi.y - lo.y) / (lo.speed - hi.speed);
    if (x < best.x) {
      best.x = x;
      best.who = {false, lo.id, hi.id};
    }
  }
  return best;
}

CaseInfo Engine::classify_case(const FrontField& field, const Participants& who) const {
  auto find = [&](long id) -> const Front& {
    for (const Front& f : field.fronts) {
      if (f.id == id) return f;
    }
    throw SolverError(ErrorCode::UnclassifiableGeometry, "participant id not found");
  };
  if (who.boundary) {
    const Front& f = find(who.lower);
    if (f.family != 1 || !f.is_weak()) {
      throw SolverError(ErrorCode::UnclassifiableGeometry,
                        "only weak 1-fronts may hit the free boundary");
    }
    return {2, f.strength()};
  }
  const Front& lo = find(who.lower);
  const Front& hi = find(who.upper);

  if (lo.family == 4 && hi.family == 4) {
    throw SolverError(ErrorCode::UnclassifiableGeometry, "two non-physical fronts meet");
  }
  if (lo.family == 4) {
    if (hi.is_strong) return {5, lo.strength() * hi.strength()};
    if (hi.is_weak()) return {6, hi.strength() * lo.strength()};
    throw SolverError(ErrorCode::UnclassifiableGeometry, "np front meets unknown");
  }
  if (hi.family == 4) {
    throw SolverError(ErrorCode::UnclassifiableGeometry, "physical front overtakes np front");
  }
  if (lo.is_strong && hi.is_strong) {
    throw SolverError(ErrorCode::UnclassifiableGeometry, "strong fronts meet");
  }
  if (lo.is_strong || hi.is_strong) {
    const Front& weak = lo.is_strong ? hi : lo;
    const Front& strong = lo.is_strong ? lo : hi;
    if (weak.family == 3 && weak.kind == FrontKind::Shock) {
      return {4, std::min(weak.strength(), strong.strength())};
    }
    if (&weak == &hi && (weak.family == 1 || weak.family == 2)) {
      return {3, weak.strength() * strong.strength()};
    }
    throw SolverError(ErrorCode::UnclassifiableGeometry, "strong front meets unexpected family");
  }
  return {1, lo.strength() * hi.strength()};
}

bool Engine::use_accurate(const CaseInfo& info, double mu_delta) {
  if (info.icase >= 5) return false;
  return info.E_delta > mu_delta;
}

long Engine::place_fronts(FrontField& field, size_t at, std::vector<Front>&& newly) {
  field.fronts.insert(field.fronts.begin() + at, std::make_move_iterator(newly.begin()),
                      std::make_move_iterator(newly.end()));
  max_fronts_ = std::max<long>(max_fronts_, static_cast<long>(field.fronts.size()));
  return static_cast<long>(newly.size());
}

void Engine::resolve(FrontField& field, const Participants& who, const CaseInfo& info,
                     bool accurate, RunHistory* history) {
  const GlimmSnapshot before = compute_functional(field, weights_, S_bar_);
  InteractionRecord rec;
  rec.x = field.x;
  rec.icase = info.icase;
  rec.E_delta = info.E_delta;
  rec.accurate = accurate;
  rec.F_before = before.F;

  auto index_of = [&](long id) -> size_t {
    for (size_t k = 0; k < field.fronts.size(); ++k) {
      if (field.fronts[k].id == id) return k;
    }
    throw SolverError(ErrorCode::UnclassifiableGeometry, "participant vanished");
  };

  std::vector<Front> born;
  size_t erase_at = 0, erase_n = 0;

  if (who.boundary) {
    const size_t k = index_of(who.lower);
    if (k != 0) throw SolverError(ErrorCode::UnclassifiableGeometry, "non-lowest front at wall");
    Front f = field.fronts[k];
    rec.incoming = {f.id};
    const double y_meet = field.boundary.y;
    const GasState U_r = f.above;
    erase_at = k;
    erase_n = 1;
    if (accurate) {
      const BoundaryReflection refl = solve_boundary_riemann(U_r, params_.p_bar, params_.gas);
      field.boundary.k = refl.k;
      if (refl.beta3 > 1e-14) {
        auto protos = split_rarefaction(refl.U_m, 3, refl.beta3, params_.delta, params_.gas);
        protos.back().above = U_r;
        for (const ProtoFront& p : protos) {
          born.push_back(from_proto(p, y_meet, next_id_++, f.gen_order));
        }
      } else if (refl.beta3 < -1e-14) {
        const ShockResult sh = shock_forward(refl.U_m, 3, refl.beta3, params_.gas);
        ProtoFront p{3, FrontKind::Shock, sh.slope, refl.U_m, U_r, refl.beta3, 0};
        born.push_back(from_proto(p, y_meet, next_id_++, f.gen_order));
      }
    } else {
      const SimplifiedOutcome out =
          simplified_case_c(U_r, params_.p_bar, params_.lambda_hat, params_.gas);
      // the free boundary keeps its slope; the reflected wave rides as a ghost
      for (const ProtoFront& p : out.fronts) {
        born.push_back(from_proto(p, y_meet, next_id_++, std::max(1, f.gen_order)));
      }
    }
  } else {
    const size_t k = index_of(who.lower);
    if (k + 1 >= field.fronts.size() || field.fronts[k + 1].id != who.upper) {
      throw SolverError(ErrorCode::UnclassifiableGeometry, "participants not adjacent");
    }
    Front lo = field.fronts[k];
    Front hi = field.fronts[k + 1];
    rec.incoming = {lo.id, hi.id};
    const double y_meet = 0.5 * (lo.y + hi.y);
    const GasState U_L = lo.below;
    const GasState U_R = hi.above;
    erase_at = k;
    erase_n = 2;

    const int fam_i = hi.family, k1 = hi.gen_order;  // i-wave from above
    const int fam_j = lo.family, k2 = lo.gen_order;  // j-wave from below

    if (info.icase == 5 || info.icase == 6) {
      // case b of the simplified solver: physical front passes unchanged
      const SimplifiedOutcome out = simplified_case_b(U_L, param_of(hi), U_R, params_.delta,
                                                      params_.lambda_hat, params_.gas);
      for (const ProtoFront& p : out.fronts) {
        const int order = p.family == 4 ? std::max(1, lo.gen_order) : hi.gen_order;
        born.push_back(from_proto(p, y_meet, next_id_++, order));
      }
    } else if (accurate) {
      auto protos = accurate_solver(U_L, U_R, params_.delta, params_.gas);
      for (const ProtoFront& p : protos) {
        const int order = assign_generation_order(p.family, fam_i, k1, fam_j, k2);
        born.push_back(from_proto(p, y_meet, next_id_++, order));
      }
    } else {
      if (fam_i > fam_j) {
        throw SolverError(ErrorCode::UnclassifiableGeometry, "case a ordering violated");
      }
      const SimplifiedOutcome out =
          simplified_case_a(U_L, param_of(hi), fam_i, param_of(lo), fam_j, U_R, params_.delta,
                            params_.lambda_hat, params_.gas);
      for (const ProtoFront& p : out.fronts) {
        const int order = p.family == 4
                              ? std::max(1, k1 + k2)
                              : assign_generation_order(p.family, fam_i, k1, fam_j, k2);
        born.push_back(from_proto(p, y_meet, next_id_++, order));
      }
    }
  }

  field.fronts.erase(field.fronts.begin() + erase_at, field.fronts.begin() + erase_at + erase_n);
  for (Front& f : born) rec.outgoing.push_back(f.id);
  place_fronts(field, erase_at, std::move(born));

  const GlimmSnapshot after = compute_functional(field, weights_, S_bar_);
  const AuditResult audit = audit_interaction(before, after, info.E_delta);
  rec.F_after = after.F;
  rec.audit_pass = audit.pass;
  rec.audit_margin = audit.margin;
  if (!audit.pass && params_.audit_strict) {
    throw SolverError(ErrorCode::AuditFailure, "Glimm decrease violated at x=" +
                                                   std::to_string(field.x));
  }
  if (history) {
    history->records.push_back(rec);
    GlimmSnapshot snap = after;
    snap.x = field.x;
    history->glimm_trace.push_back(snap);
    history->checkpoints.push_back(field);
  }
}

void Engine::advance(FrontField& field, double x_stop, RunHistory* history) {
  if (history && history->checkpoints.empty()) {
    history->checkpoints.push_back(field);
    GlimmSnapshot snap = compute_functional(field, weights_, S_bar_);
    snap.x = field.x;
    history->glimm_trace.push_back(snap);
  }
  for (;;) {
    NextInteraction ni = next_interaction(field);
    // simultaneous-interaction rule: nudge the later-created front of a
    // coincident, disjoint event and rescan
    for (int guard = 0; guard < 64; ++guard) {
      bool bumped = false;
      for (size_t k = 0; k + 1 < field.fronts.size() && !bumped; ++k) {
        const Front& lo = field.fronts[k];
        const Front& hi = field.fronts[k + 1];
        if (lo.speed <= hi.speed) continue;
        const double x = field.x + (hi.y - lo.y) / (lo.speed - hi.speed);
        if (std::abs(x - ni.x) < params_.tie_tol && lo.id != ni.who.lower &&
            hi.id != ni.who.upper && lo.id != ni.who.upper && hi.id != ni.who.lower) {
          Front& later = field.fronts[lo.id > hi.id ? k : k + 1];
          later.speed += params_.tie_bump;
          bumped = true;
        }
      }
      if (!bumped) break;
      ni = next_interaction(field);
    }
    if (!(ni.x <= x_stop)) break;
    if (++events_ > params_.max_events) {
      throw SolverError(ErrorCode::StepFailure, "advance: event budget exhausted");
    }
    move_field(field, ni.x);
    const CaseInfo info = classify_case(field, ni.who);
    const bool accurate = use_accurate(info, params_.mu_delta);
    resolve(field, ni.who, info, accurate, history);
  }
  move_field(field, x_stop);
}

RunSetup prepare_run(const GasState& U_plus, double p_bar, double delta, double delta0,
                     double L0_bound, int constant_samples, unsigned long seed,
                     const GasParams& par) {
  RunSetup s;
  s.bg = background_solution(U_plus, p_bar, par);
  s.constants = estimate_constants(U_plus, p_bar, delta0, constant_samples, seed, par);
  s.recipe_weights = Weights::small_tv_recipe(s.constants);
  const bool gate_ok = s.recipe_weights.finite() && L0_bound < s.recipe_weights.delta_star &&
                       delta < s.recipe_weights.delta_star;
  if (gate_ok) {
    s.run_weights = s.recipe_weights;
  } else {
    s.run_weights = Weights::desk_scale(s.constants, L0_bound, delta);
    s.used_fallback = true;
  }
  s.params.gas = par;
  s.params.U_plus = U_plus;
  s.params.p_bar = p_bar;
  s.params.delta = delta;
  s.params.delta0 = delta0;
  const FanGeometry geo = fan_geometry(U_plus, p_bar, delta0, par);
  s.params.lambda_hat = geo.lambda_hat;
  s.params.lambda1_star = geo.lambda1_star;
  s.params.lambda3_star = geo.lambda3_star;
  s.params.mu_delta = mu_delta_recipe(delta, s.constants, s.recipe_weights.delta_star);
  return s;
}

}  // namespace rarefan
