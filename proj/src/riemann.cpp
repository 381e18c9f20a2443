#include "rarefan/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace rarefan {

namespace {

// 4x4 linear solve, partial pivoting.
Vec4 solve4(std::array<Vec4, 4> A, Vec4 b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    if (A[col][col] == 0) throw SolverError(ErrorCode::NoConvergence, "singular Jacobian");
    for (int r = col + 1; r < 4; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec4 x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

GasState chain_fast(const GasState& U_L, const Vec4& a, const GasParams& par) {
  // curve-state route for families 1/3 (identical manifolds, cheaper than the ODE)
  GasState U = U_L;
  if (a[0] != 0) {
    U = a[0] >= 0 ? rarefaction_curve_state(U, 1, a[0], par) : shock_forward(U, 1, a[0], par).state;
  }
  if (a[1] != 0 || a[2] != 0) U = contact_forward(U, a[1], a[2]);
  if (a[3] != 0) {
    U = a[3] >= 0 ? rarefaction_curve_state(U, 3, a[3], par) : shock_forward(U, 3, a[3], par).state;
  }
  return U;
}

}  // namespace

GasState wave_chain(const GasState& U_L, const WaveStrengths& s, const GasParams& par) {
  GasState U = U_L;
  if (s.a1 != 0) U = wave_forward(U, {WaveFamily::F1, s.a1}, par);
  U = contact_forward(U, s.a21, s.a22);
  if (s.a3 != 0) U = wave_forward(U, {WaveFamily::F3, s.a3}, par);
  return U;
}

RiemannSolution solve_riemann(const GasState& U_L, const GasState& U_R, const GasParams& par,
                              const NewtonOptions& opt) {
  require_supersonic(U_L, par, "solve_riemann");
  require_supersonic(U_R, par, "solve_riemann");

  // linearized initial guess: U_R - U_L in the eigenvector frame at U_L
  const EigenStructure e = eigenvectors(U_L, par);
  Vec4 x = solve4({Vec4{e.r1[0], e.r21[0], e.r22[0], e.r3[0]},
                   Vec4{e.r1[1], e.r21[1], e.r22[1], e.r3[1]},
                   Vec4{e.r1[2], e.r21[2], e.r22[2], e.r3[2]},
                   Vec4{e.r1[3], e.r21[3], e.r22[3], e.r3[3]}},
                  U_R.vec() - U_L.vec());

  double res = 0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Vec4 F = chain_fast(U_L, x, par).vec() - U_R.vec();
    res = std::max(std::max(std::abs(F[0]), std::abs(F[1])),
                   std::max(std::abs(F[2]), std::abs(F[3])));
    if (res <= opt.tol * 1e-2 || (res <= opt.tol && it > 8)) break;
    std::array<Vec4, 4> J{};
    for (int k = 0; k < 4; ++k) {
      Vec4 xp = x;
      xp[k] += opt.fd_step;
      const Vec4 Fp = chain_fast(U_L, xp, par).vec() - U_R.vec();
      for (int r = 0; r < 4; ++r) J[r][k] = (Fp[r] - F[r]) / opt.fd_step;
    }
    const Vec4 dx = solve4(J, F);
    for (int k = 0; k < 4; ++k) x[k] -= dx[k];
    if (it == opt.max_iter - 1) {
      throw SolverError(ErrorCode::NoConvergence,
                        "solve_riemann: residual " + std::to_string(res));
    }
  }

  // numerical zeros below the solver tolerance would otherwise emit ghost fronts
  for (int k = 0; k < 4; ++k) {
    if (std::abs(x[k]) < 1e-11) x[k] = 0.0;
  }
  RiemannSolution sol;
  sol.s = {x[0], x[1], x[2], x[3]};
  sol.mid1 = (x[0] != 0) ? chain_fast(U_L, {x[0], 0, 0, 0}, par) : U_L;
  sol.mid2 = contact_forward(sol.mid1, x[1], x[2]);
  sol.residual = res;
  return sol;
}

double boundary_reflection_coefficient(const GasState& U_r, const GasParams& par) {
  const double l1 = eigenvalue(U_r, par, 1);
  const double l3 = eigenvalue(U_r, par, 3);
  const double l2 = U_r.v / U_r.u;
  return -eigen_k(U_r, par, 1) * (l1 - l2) / (eigen_k(U_r, par, 3) * (l3 - l2));
}

BoundaryReflection solve_boundary_riemann(const GasState& U_r, double p_bar, const GasParams& par) {
  require_supersonic(U_r, par, "solve_boundary_riemann");
  BoundaryReflection out;
  out.beta3 = inverse_strength_from_pressure(U_r, p_bar, par);
  out.U_m = (out.beta3 >= 0) ? rarefaction_curve_state(U_r, 3, -out.beta3, par)
                             : shock_inverse(U_r, 3, out.beta3, par).state;
  if (!is_supersonic(out.U_m, par)) {
    throw SolverError(ErrorCode::Unreachable, "solve_boundary_riemann: subsonic mid state");
  }
  out.k = out.U_m.v / out.U_m.u;
  return out;
}

namespace {

// State on the 3-rarefaction curve through U_plus at pressure p (entropy and
// Bernoulli constants of U_plus).
GasState curve_state_at_pressure(const GasState& U_plus, double p, const GasParams& par) {
  const double g = par.gamma;
  const double B = bernoulli(U_plus, par);
  const double A = entropy_A(U_plus, par);
  const double c2 = g * std::pow(A, 1.0 / g) * std::pow(p, (g - 1.0) / g);
  const double q2 = B - 2.0 * c2 / (g - 1.0);
  if (q2 <= 0) throw SolverError(ErrorCode::PressureOutOfRange, "curve state: cavitation");
  const double q = std::sqrt(q2);
  const double th = flow_angle(U_plus) + pm_integral(speed(U_plus), B, par) - pm_integral(q, B, par);
  const double rho = std::pow(p / A, 1.0 / g);
  return {q * std::cos(th), q * std::sin(th), p, rho};
}

}  // namespace

GasState BackgroundSolution::fan_state(double xi) const {
  if (xi <= k2 || xi >= k1) {
    throw SolverError(ErrorCode::OutOfRange, "fan_state: xi outside (k2, k1)");
  }
  // solve theta in (theta_minus, 0) with lambda3(U_sharp(theta)) = xi
  const double B = bernoulli(U_plus, par);
  const double Ip = pm_integral(speed(U_plus), B, par);
  const double th_plus = flow_angle(U_plus);
  auto state_of_theta = [&](double th) {
    const double q = pm_inverse(Ip + th_plus - th, B, par);
    const double g = par.gamma;
    const double c2 = 0.5 * (g - 1.0) * (B - q * q);
    const double A = entropy_A(U_plus, par);
    const double rho = std::pow(c2 / (g * A), 1.0 / (g - 1.0));
    return GasState{q * std::cos(th), q * std::sin(th), A * std::pow(rho, g), rho};
  };
  double lo = std::atan(k_b < 0 ? k_b : 0.0), hi = th_plus;
  lo = std::atan2(U_minus.v, U_minus.u);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eigenvalue(state_of_theta(mid), par, 3) < xi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return state_of_theta(0.5 * (lo + hi));
}

BackgroundSolution background_solution(const GasState& U_plus, double p_bar, const GasParams& par) {
  require_supersonic(U_plus, par, "background_solution");
  BackgroundSolution bg;
  bg.par = par;
  bg.U_plus = U_plus;
  bg.p_bar = p_bar;

  auto chi = [&](double p) {
    const GasState U = curve_state_at_pressure(U_plus, p, par);
    return U.u / sonic_speed(U, par);
  };

  // p_*: lowest pressure keeping u > c along the curve, with a strict margin
  {
    double lo = 1e-9 * U_plus.p, hi = U_plus.p;
    bool lo_valid;
    try {
      lo_valid = chi(lo) > 1.0 + 1e-6;
    } catch (const SolverError&) {
      lo_valid = false;
    }
    if (lo_valid) {
      bg.p_star = lo;
    } else {
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * U_plus.p; ++it) {
        const double mid = 0.5 * (lo + hi);
        bool ok;
        try {
          ok = chi(mid) > 1.0 + 1e-6;
        } catch (const SolverError&) {
          ok = false;
        }
        if (ok) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      bg.p_star = hi;
    }
  }

  if (!(p_bar > bg.p_star && p_bar < U_plus.p)) {
    throw SolverError(ErrorCode::PressureOutOfRange, "background_solution: need p_* < p_bar < p_+");
  }

  bg.U_minus = curve_state_at_pressure(U_plus, p_bar, par);
  bg.k_b = bg.U_minus.v / bg.U_minus.u;
  bg.k1 = eigenvalue(U_plus, par, 3);
  bg.k2 = eigenvalue(bg.U_minus, par, 3);
  bg.S_bar = bg.k1 - bg.k2;

  // measured constant of the fan variation bound TV <= C |p_+ - p_-|
  const int n = 256;
  double tv = 0;
  GasState prev = bg.U_minus;
  for (int i = 1; i <= n; ++i) {
    const double p = p_bar + (U_plus.p - p_bar) * i / n;
    const GasState cur = curve_state_at_pressure(U_plus, p, par);
    tv += distance(cur, prev);
    prev = cur;
  }
  bg.tv_constant = tv / (U_plus.p - p_bar);
  return bg;
}

std::vector<ProtoFront> split_rarefaction(const GasState& U_l, int family, double alpha,
                                          double delta, const GasParams& par) {
  if (alpha < 0) throw SolverError(ErrorCode::OutOfRange, "split_rarefaction: alpha < 0");
  std::vector<ProtoFront> out;
  if (alpha == 0) return out;
  const int nu = std::max(1, static_cast<int>(std::ceil(alpha / delta - 1e-12)));
  const double piece = alpha / nu;
  GasState below = U_l;
  for (int k = 0; k < nu; ++k) {
    const GasState above = rarefaction_forward(below, family, piece, par);
    ProtoFront f;
    f.family = family;
    f.kind = FrontKind::Rarefaction;
    f.below = below;
    f.above = above;
    f.alpha = piece;
    f.speed = eigenvalue(above, par, family);
    out.push_back(f);
    below = above;
  }
  return out;
}

std::vector<ProtoFront> emit_wave_fronts(const GasState& U_L, const WaveStrengths& s, double delta,
                                         const GasParams& par) {
  std::vector<ProtoFront> out;
  GasState U = U_L;
  if (s.a1 != 0) {
    if (s.a1 > 0) {
      auto fronts = split_rarefaction(U, 1, s.a1, delta, par);
      out.insert(out.end(), fronts.begin(), fronts.end());
      U = fronts.back().above;
    } else {
      const ShockResult sh = shock_forward(U, 1, s.a1, par);
      out.push_back({1, FrontKind::Shock, sh.slope, U, sh.state, s.a1, 0});
      U = sh.state;
    }
  }
  if (s.a21 != 0 || s.a22 != 0) {
    const GasState above = contact_forward(U, s.a21, s.a22);
    out.push_back({2, FrontKind::Contact, U.v / U.u, U, above, s.a21, s.a22});
    U = above;
  }
  if (s.a3 != 0) {
    if (s.a3 > 0) {
      auto fronts = split_rarefaction(U, 3, s.a3, delta, par);
      out.insert(out.end(), fronts.begin(), fronts.end());
    } else {
      const ShockResult sh = shock_forward(U, 3, s.a3, par);
      out.push_back({3, FrontKind::Shock, sh.slope, U, sh.state, s.a3, 0});
    }
  }
  return out;
}

std::vector<ProtoFront> accurate_solver(const GasState& U_L, const GasState& U_R, double delta,
                                        const GasParams& par, const NewtonOptions& opt) {
  const RiemannSolution sol = solve_riemann(U_L, U_R, par, opt);
  auto fronts = emit_wave_fronts(U_L, sol.s, delta, par);
  // pin the exact right state (emit re-integrates; keep endpoint bit-consistent)
  if (!fronts.empty()) fronts.back().above = U_R;
  return fronts;
}

namespace {

WaveParam param_for(int family, double a, double a22 = 0) {
  WaveParam w;
  w.family = family == 1 ? WaveFamily::F1 : family == 3 ? WaveFamily::F3 : WaveFamily::F2Vortex;
  w.alpha = a;
  w.alpha22 = a22;
  return w;
}

WaveStrengths chain_of(int family, const WaveParam& w) {
  WaveStrengths s;
  if (family == 1) s.a1 = w.alpha;
  if (family == 2) {
    s.a21 = w.alpha;
    s.a22 = w.alpha22;
  }
  if (family == 3) s.a3 = w.alpha;
  return s;
}

}  // namespace

SimplifiedOutcome simplified_case_a(const GasState& U_L, const WaveParam& alpha_i, int i,
                                    const WaveParam& beta_j, int j, const GasState& U_R,
                                    double delta, double lambda_hat, const GasParams& par) {
  if (i > j) throw SolverError(ErrorCode::UnclassifiableGeometry, "case a requires i <= j");
  SimplifiedOutcome out;
  WaveStrengths chain;
  if (i == j) {
    WaveParam merged = alpha_i;
    merged.alpha += beta_j.alpha;
    merged.alpha22 += beta_j.alpha22;
    chain = chain_of(i, merged);
  } else {
    chain = chain_of(i, alpha_i);
    const WaveStrengths cj = chain_of(j, beta_j);
    chain.a1 += cj.a1;
    chain.a21 += cj.a21;
    chain.a22 += cj.a22;
    chain.a3 += cj.a3;
  }
  const GasState U_aux = wave_chain(U_L, chain, par);
  out.fronts = emit_wave_fronts(U_L, chain, delta, par);
  out.np_strength = distance(U_R, U_aux);
  out.fronts.push_back({4, FrontKind::NonPhysical, lambda_hat, U_aux, U_R, out.np_strength, 0});
  return out;
}

SimplifiedOutcome simplified_case_b(const GasState& U_L, const WaveParam& alpha_i,
                                    const GasState& U_R, double delta, double lambda_hat,
                                    const GasParams& par) {
  (void)delta;
  SimplifiedOutcome out;
  const GasState U_mid = wave_forward(U_L, alpha_i, par);
  ProtoFront phys;
  phys.family = alpha_i.family == WaveFamily::F1   ? 1
                : alpha_i.family == WaveFamily::F3 ? 3
                                                   : 2;
  phys.kind = alpha_i.family == WaveFamily::F2Vortex || alpha_i.family == WaveFamily::F2Entropy
                  ? FrontKind::Contact
              : alpha_i.alpha >= 0 ? FrontKind::Rarefaction
                                   : FrontKind::Shock;
  phys.below = U_L;
  phys.above = U_mid;
  phys.alpha = alpha_i.alpha;
  phys.alpha2 = alpha_i.alpha22;
  if (phys.kind == FrontKind::Contact) {
    phys.speed = U_L.v / U_L.u;
  } else if (phys.kind == FrontKind::Rarefaction) {
    phys.speed = eigenvalue(U_mid, par, phys.family);
  } else {
    phys.speed = shock_forward(U_L, phys.family, alpha_i.alpha, par).slope;
  }
  out.fronts.push_back(phys);
  out.np_strength = distance(U_mid, U_R);
  out.fronts.push_back({4, FrontKind::NonPhysical, lambda_hat, U_mid, U_R, out.np_strength, 0});
  return out;
}

SimplifiedOutcome simplified_case_c(const GasState& U_r, double p_bar, double lambda_hat,
                                    const GasParams& par) {
  SimplifiedOutcome out;
  const BoundaryReflection refl = solve_boundary_riemann(U_r, p_bar, par);
  out.np_strength = distance(refl.U_m, U_r);
  out.fronts.push_back({4, FrontKind::NonPhysical, lambda_hat, refl.U_m, U_r, out.np_strength, 0});
  return out;
}

FanGeometry fan_geometry(const GasState& U_plus, double p_bar, double delta0,
                         const GasParams& par) {
  const double B0 = bernoulli(U_plus, par);
  const double A0 = entropy_A(U_plus, par);
  const double J0 = pm_integral(speed(U_plus), B0, par) + flow_angle(U_plus);
  const double g = par.gamma;

  double max_l1 = -1e300, min_l2 = 1e300, max_l2 = -1e300, min_l3 = 1e300, max_l3 = -1e300;
  const int np = 25;
  const std::array<double, 3> dd = {-0.99 * delta0, 0.0, 0.99 * delta0};
  for (int ip = 0; ip <= np; ++ip) {
    const double p = (p_bar - 0.5 * delta0) + (U_plus.p + 0.5 * delta0 - (p_bar - 0.5 * delta0)) *
                                                  static_cast<double>(ip) / np;
    if (p <= 0) continue;
    for (double dI : dd) {
      for (double dB : dd) {
        for (double dA : dd) {
          const double B = B0 + dB;
          const double A = A0 + dA;
          const double c2 = g * std::pow(A, 1.0 / g) * std::pow(p, (g - 1.0) / g);
          const double q2 = B - 2.0 * c2 / (g - 1.0);
          if (q2 <= c2) continue;
          const double q = std::sqrt(q2);
          double th;
          try {
            th = (J0 + dI) - pm_integral(q, B, par);
          } catch (const SolverError&) {
            continue;
          }
          const GasState U{q * std::cos(th), q * std::sin(th), p, std::pow(p / A, 1.0 / g)};
          if (!is_supersonic(U, par)) continue;
          max_l1 = std::max(max_l1, eigenvalue(U, par, 1));
          min_l2 = std::min(min_l2, eigenvalue(U, par, 2));
          max_l2 = std::max(max_l2, eigenvalue(U, par, 2));
          min_l3 = std::min(min_l3, eigenvalue(U, par, 3));
          max_l3 = std::max(max_l3, eigenvalue(U, par, 3));
        }
      }
    }
  }
  if (max_l3 < min_l3) throw SolverError(ErrorCode::ConstantsInvalid, "fan_geometry: empty sample");
  FanGeometry geo;
  geo.lambda_hat = max_l3 + 0.1;
  geo.lambda1_star = 0.5 * (max_l1 + min_l2);
  geo.lambda3_star = 0.5 * (max_l2 + min_l3);
  return geo;
}

}  // namespace rarefan
