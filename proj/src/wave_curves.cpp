#include "rarefan/wave_curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rarefan {

namespace {

// Invariant manifold of the j-rarefaction curve through U0, parametrized by q.
// Family 3 conserves I + theta, family 1 conserves I - theta; B and A are
// conserved by both.
struct RarefactionManifold {
  double B, A, J, sgn;  // J = I + sgn*theta
  const GasParams* par;

  static RarefactionManifold through(const GasState& U0, int family, const GasParams& par) {
    RarefactionManifold m;
    m.B = bernoulli(U0, par);
    m.A = entropy_A(U0, par);
    m.sgn = (family == 3) ? 1.0 : -1.0;
    m.J = pm_integral(speed(U0), m.B, par) + m.sgn * flow_angle(U0);
    m.par = &par;
    return m;
  }

  GasState state_at_q(double q) const {
    const double g = par->gamma;
    const double c2 = 0.5 * (g - 1.0) * (B - q * q);
    if (c2 <= 0) throw SolverError(ErrorCode::LeftSupersonicLost, "rarefaction: c^2 <= 0");
    const double th = sgn * (J - pm_integral(q, B, *par));
    const double rho = std::pow(c2 / (g * A), 1.0 / (g - 1.0));
    const double p = A * std::pow(rho, g);
    return {q * std::cos(th), q * std::sin(th), p, rho};
  }
};

// Solve f(x) = 0 by expanding the bracket from x0 in direction dir, then bisection.
double expand_and_bisect(const std::function<double(double)>& f, double x0, double dir,
                         double step0, double limit, const char* what) {
  double a = x0, fa = f(a);
  if (fa == 0) return a;
  double step = step0;
  double b = a, fb = fa;
  for (int it = 0; it < 200; ++it) {
    b = a + dir * step;
    if (std::abs(b - x0) > limit) throw SolverError(ErrorCode::NoRoot, what);
    fb = f(b);
    if (fa * fb <= 0) break;
    a = b;
    fa = fb;
    step *= 2.0;
    if (it == 199) throw SolverError(ErrorCode::NoRoot, what);
  }
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  for (int it = 0; it < 200 && b - a > 1e-16 * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fa * fm <= 0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

// Cash-Karp embedded 4(5) pair.
struct Rk45Tableau {
  static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
  static constexpr double b21 = 0.2;
  static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
  static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
  static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                          b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                          c6 = 512.0 / 1771.0;
  static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0, d4 = 13525.0 / 55296.0,
                          d5 = 277.0 / 14336.0, d6 = 0.25;
};

GasState integrate_rarefaction(const GasState& U0, int family, double alpha, double direction,
                               const GasParams& par, const OdeOptions& opt) {
  require_supersonic(U0, par, "rarefaction");
  if (alpha < 0) throw SolverError(ErrorCode::OutOfRange, "rarefaction: alpha < 0");
  if (alpha == 0) return U0;

  const auto manifold = RarefactionManifold::through(U0, family, par);
  auto rhs = [&](const Vec4& y) -> Vec4 {
    GasState U = GasState::from_vec(y);
    if (!is_supersonic(U, par)) {
      throw SolverError(ErrorCode::LeftSupersonicLost, "rarefaction: state left u > c");
    }
    return direction * eigenvector(U, par, family);
  };

  using T = Rk45Tableau;
  Vec4 y = U0.vec();
  double t = 0.0;
  double h = std::min(alpha, 0.05);
  int accepted = 0;
  while (t < alpha) {
    h = std::min(h, alpha - t);
    const Vec4 k1 = rhs(y);
    const Vec4 k2 = rhs(y + (h * T::b21) * k1);
    const Vec4 k3 = rhs(y + (h * T::b31) * k1 + (h * T::b32) * k2);
    const Vec4 k4 = rhs(y + (h * T::b41) * k1 + (h * T::b42) * k2 + (h * T::b43) * k3);
    const Vec4 k5 =
        rhs(y + (h * T::b51) * k1 + (h * T::b52) * k2 + (h * T::b53) * k3 + (h * T::b54) * k4);
    const Vec4 k6 = rhs(y + (h * T::b61) * k1 + (h * T::b62) * k2 + (h * T::b63) * k3 +
                        (h * T::b64) * k4 + (h * T::b65) * k5);
    const Vec4 y5 = y + (h * T::c1) * k1 + (h * T::c3) * k3 + (h * T::c4) * k4 + (h * T::c6) * k6;
    const Vec4 y4 = y + (h * T::d1) * k1 + (h * T::d3) * k3 + (h * T::d4) * k4 + (h * T::d5) * k5 +
                    (h * T::d6) * k6;
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
    }
    if (err <= 1.0) {
      t += h;
      // project back onto the invariant manifold, keeping q
      GasState Us = GasState::from_vec(y5);
      y = manifold.state_at_q(speed(Us)).vec();
      ++accepted;
      if (!is_supersonic(GasState::from_vec(y), par)) {
        throw SolverError(ErrorCode::LeftSupersonicLost, "rarefaction: state left u > c");
      }
    }
    const double fac = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.1, 5.0);
    if (h < 1e-14) throw SolverError(ErrorCode::StepFailure, "rarefaction: step size underflow");
    if (accepted > 100000) throw SolverError(ErrorCode::StepFailure, "rarefaction: too many steps");
  }
  return GasState::from_vec(y);
}

}  // namespace

GasState rarefaction_forward(const GasState& U_l, int family, double alpha, const GasParams& par,
                             const OdeOptions& opt) {
  return integrate_rarefaction(U_l, family, alpha, +1.0, par, opt);
}

GasState rarefaction_inverse(const GasState& U_r, int family, double alpha, const GasParams& par,
                             const OdeOptions& opt) {
  return integrate_rarefaction(U_r, family, alpha, -1.0, par, opt);
}

GasState rarefaction_curve_state(const GasState& U0, int family, double alpha,
                                 const GasParams& par) {
  require_supersonic(U0, par, "rarefaction_curve_state");
  // parameters at roundoff scale cannot be bracketed against the lambda noise
  // of the invariant reconstruction (~1e-16)
  if (std::abs(alpha) < 1e-14) return U0;
  const auto manifold = RarefactionManifold::through(U0, family, par);
  const double target = eigenvalue(U0, par, family) + alpha;
  auto f = [&](double q) { return eigenvalue(manifold.state_at_q(q), par, family) - target; };
  // family 3: lambda grows as q shrinks; family 1: as q grows
  const double dir = ((family == 3) == (alpha > 0)) ? -1.0 : 1.0;
  const double q = expand_and_bisect(f, speed(U0), dir, 1e-6, speed(U0),
                                     "rarefaction_curve_state: no bracket");
  return manifold.state_at_q(q);
}

namespace {

// Right state on the forward j-shock curve through U_l, parametrized by the
// density ratio w = rho_r/rho_l (Hugoniot centered at U_l).
ShockResult shock_right_of_ratio(const GasState& U_l, int family, double w, const GasParams& par) {
  const double g = par.gamma;
  const double cl2 = g * U_l.p / U_l.rho;
  const double b = 0.5 * (g + 1.0) - 0.5 * (g - 1.0) * w;
  if (b <= 0) throw SolverError(ErrorCode::NoRoot, "shock: density ratio beyond Hugoniot limit");
  const double pr = U_l.p + cl2 / b * U_l.rho * (w - 1.0);
  if (pr <= 0) throw SolverError(ErrorCode::NoRoot, "shock: negative downstream pressure");
  const double rhor = U_l.rho * w;
  const double cbar2 = rhor * cl2 / (U_l.rho * b);
  const double q2 = U_l.u * U_l.u + U_l.v * U_l.v;
  if (q2 <= cbar2) throw SolverError(ErrorCode::NoRoot, "shock: q^2 <= cbar^2");
  if (U_l.u * U_l.u <= cbar2) throw SolverError(ErrorCode::NoRoot, "shock: u^2 <= cbar^2");
  const double sgn = (family == 1) ? -1.0 : 1.0;
  const double s =
      (U_l.u * U_l.v + sgn * std::sqrt(cbar2) * std::sqrt(q2 - cbar2)) / (U_l.u * U_l.u - cbar2);
  const double dp = pr - U_l.p;
  const double dv = dp / (U_l.rho * (s * U_l.u - U_l.v));
  return {{U_l.u - s * dv, U_l.v + dv, pr, rhor}, s};
}

// Left state on the inverse j-shock curve of U_r, parametrized by w = rho_l/rho_r
// (the jump relations organized around the downstream state).
ShockResult shock_left_of_ratio(const GasState& U_r, int family, double w, const GasParams& par) {
  const double g = par.gamma;
  const double cr2 = g * U_r.p / U_r.rho;
  const double b = 0.5 * (g + 1.0) - 0.5 * (g - 1.0) * w;
  if (b <= 0) throw SolverError(ErrorCode::NoRoot, "shock: density ratio beyond Hugoniot limit");
  const double rhol = U_r.rho * w;
  const double pl = U_r.p - cr2 / b * (U_r.rho - rhol);
  if (pl <= 0) throw SolverError(ErrorCode::NoRoot, "shock: negative upstream pressure");
  const double cbar2 = rhol * cr2 / (U_r.rho * b);
  const double q2 = U_r.u * U_r.u + U_r.v * U_r.v;
  if (q2 <= cbar2) throw SolverError(ErrorCode::NoRoot, "shock: q^2 <= cbar^2");
  if (U_r.u * U_r.u <= cbar2) throw SolverError(ErrorCode::NoRoot, "shock: u^2 <= cbar^2");
  const double sgn = (family == 1) ? -1.0 : 1.0;
  const double s =
      (U_r.u * U_r.v + sgn * std::sqrt(cbar2) * std::sqrt(q2 - cbar2)) / (U_r.u * U_r.u - cbar2);
  const double dp = U_r.p - pl;  // [p] with [h] = h_r - h
  const double dv = dp / (U_r.rho * (s * U_r.u - U_r.v));
  return {{U_r.u + s * dv, U_r.v - dv, pl, rhol}, s};
}

ShockResult solve_shock(const GasState& U_base, int family, double alpha, const GasParams& par,
                        bool forward) {
  require_supersonic(U_base, par, "shock");
  if (alpha > 1e-14) throw SolverError(ErrorCode::EntropyViolation, "shock: alpha > 0");
  if (std::abs(alpha) < 1e-14) return {U_base, eigenvalue(U_base, par, family)};

  auto curve = [&](double w) {
    return forward ? shock_right_of_ratio(U_base, family, w, par)
                   : shock_left_of_ratio(U_base, family, w, par);
  };
  const double lam0 = eigenvalue(U_base, par, family);
  auto g = [&](double w) {
    const ShockResult r = curve(w);
    const double lam_other = eigenvalue(r.state, par, family);
    return forward ? (lam_other - lam0 - alpha) : (lam0 - lam_other - alpha);
  };

  // acoustic initial guess: dw/dalpha at w=1 from the rarefaction-side slope
  const double kj = eigen_k(U_base, par, family);
  const double c2 = par.gamma * U_base.p / U_base.rho;
  double dwda = kj * (lam0 * U_base.u - U_base.v) / c2;
  if (!forward) dwda = -dwda;  // left-state density moves the other way
  double w = 1.0 + alpha * dwda;
  // admissible compression side: forward 1-shock and inverse 3-shock have w > 1
  const bool upper = (family == 1) == forward;
  const double wmax = (par.gamma + 1.0) / (par.gamma - 1.0) - 1e-9;
  w = upper ? std::clamp(w, 1.0 + 1e-14, wmax) : std::clamp(w, 1e-9, 1.0 - 1e-14);

  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const double gv = g(w);
    if (std::abs(gv) < 1e-12) {
      converged = true;
      break;
    }
    const double h = 1e-8 * std::max(1.0, std::abs(w));
    const double gp = (g(w + h) - gv) / h;
    if (gp == 0) break;
    double wn = w - gv / gp;
    wn = upper ? std::clamp(wn, 1.0 + 1e-15, wmax) : std::clamp(wn, 1e-9, 1.0 - 1e-15);
    if (std::abs(wn - w) < 1e-17) {
      w = wn;
      converged = std::abs(g(w)) < 1e-10;
      break;
    }
    w = wn;
  }
  if (!converged) {
    // bisection fallback from the identity end
    const double dir = upper ? 1.0 : -1.0;
    w = expand_and_bisect(g, upper ? 1.0 + 1e-14 : 1.0 - 1e-14, dir, 1e-6,
                          upper ? wmax - 1.0 : 1.0, "shock: no bracket");
    if (std::abs(g(w)) > 1e-9) throw SolverError(ErrorCode::NoConvergence, "shock: residual");
  }
  ShockResult r = curve(w);
  const GasState& right = forward ? r.state : U_base;
  const GasState& left = forward ? U_base : r.state;
  const bool p_ok = (family == 1) ? (right.p > left.p) : (right.p < left.p);
  if (!p_ok) throw SolverError(ErrorCode::EntropyViolation, "shock: inadmissible branch");
  return r;
}

}  // namespace

ShockResult shock_forward(const GasState& U_l, int family, double alpha, const GasParams& par) {
  return solve_shock(U_l, family, alpha, par, true);
}

ShockResult shock_inverse(const GasState& U_r, int family, double alpha, const GasParams& par) {
  return solve_shock(U_r, family, alpha, par, false);
}

GasState contact_forward(const GasState& U_l, double alpha21, double alpha22) {
  const double su = std::exp(alpha21);
  return {U_l.u * su, U_l.v * su, U_l.p, U_l.rho * std::exp(alpha22)};
}

GasState wave_forward(const GasState& U_l, const WaveParam& w, const GasParams& par) {
  switch (w.family) {
    case WaveFamily::F1:
      return w.alpha >= 0 ? rarefaction_forward(U_l, 1, w.alpha, par)
                          : shock_forward(U_l, 1, w.alpha, par).state;
    case WaveFamily::F3:
      return w.alpha >= 0 ? rarefaction_forward(U_l, 3, w.alpha, par)
                          : shock_forward(U_l, 3, w.alpha, par).state;
    case WaveFamily::F2Vortex:
      return contact_forward(U_l, w.alpha, 0.0);
    case WaveFamily::F2Entropy:
      return contact_forward(U_l, 0.0, w.alpha);
    case WaveFamily::NonPhysical:
      throw SolverError(ErrorCode::OutOfRange, "wave_forward: non-physical has no curve");
  }
  return U_l;
}

GasState wave_inverse(const GasState& U_r, const WaveParam& w, const GasParams& par) {
  switch (w.family) {
    case WaveFamily::F1:
      return w.alpha >= 0 ? rarefaction_inverse(U_r, 1, w.alpha, par)
                          : shock_inverse(U_r, 1, w.alpha, par).state;
    case WaveFamily::F3:
      return w.alpha >= 0 ? rarefaction_inverse(U_r, 3, w.alpha, par)
                          : shock_inverse(U_r, 3, w.alpha, par).state;
    case WaveFamily::F2Vortex:
      return contact_forward(U_r, -w.alpha, 0.0);
    case WaveFamily::F2Entropy:
      return contact_forward(U_r, 0.0, -w.alpha);
    case WaveFamily::NonPhysical:
      throw SolverError(ErrorCode::OutOfRange, "wave_inverse: non-physical has no curve");
  }
  return U_r;
}

namespace {

double pressure_on_3curve(const GasState& U_l, double alpha, const GasParams& par) {
  if (alpha >= 0) return rarefaction_curve_state(U_l, 3, alpha, par).p;
  return shock_forward(U_l, 3, alpha, par).state.p;
}

}  // namespace

PressureInversion strength_from_pressure_ex(const GasState& U_l, double p_target,
                                            const GasParams& par, double delta_star_prime) {
  require_supersonic(U_l, par, "strength_from_pressure");
  PressureInversion out;
  if (p_target == U_l.p) return out;

  auto f = [&](double a) { return pressure_on_3curve(U_l, a, par) - p_target; };
  double alpha;
  if (p_target > U_l.p) {
    alpha = expand_and_bisect(f, 0.0, +1.0, 1e-4, 1e6, "strength_from_pressure: unreachable above");
  } else {
    // shock side, limited extension
    if (f(-delta_star_prime) > 0) {
      throw SolverError(ErrorCode::Unreachable, "strength_from_pressure: below shock extension");
    }
    double a = 0.0, b = -delta_star_prime, fa = f(0.0), fb = f(b);
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-16; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fa * fm <= 0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    alpha = 0.5 * (a + b);
  }
  out.alpha = alpha;
  // monotonicity check plus slope bounds over the traversed range
  const int n = 8;
  double prev = U_l.p;
  double c1 = 1e300, c2 = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double a = alpha * i / n;
    const double p = pressure_on_3curve(U_l, a, par);
    const double slope = std::abs((p - prev) / (alpha / n));
    c1 = std::min(c1, slope);
    c2 = std::max(c2, slope);
    if ((alpha > 0 && p < prev) || (alpha < 0 && p > prev)) {
      throw SolverError(ErrorCode::Unreachable, "strength_from_pressure: monotonicity lost");
    }
    prev = p;
  }
  out.c1 = c1;
  out.c2 = c2;
  return out;
}

double strength_from_pressure(const GasState& U_l, double p_target, const GasParams& par,
                              double delta_star_prime) {
  return strength_from_pressure_ex(U_l, p_target, par, delta_star_prime).alpha;
}

double inverse_strength_from_pressure(const GasState& U_r, double p_target, const GasParams& par,
                                      double delta_star_prime) {
  require_supersonic(U_r, par, "inverse_strength_from_pressure");
  if (p_target == U_r.p) return 0.0;
  auto f = [&](double b) {
    const GasState Um = (b >= 0) ? rarefaction_curve_state(U_r, 3, -b, par)
                                 : shock_inverse(U_r, 3, b, par).state;
    return Um.p - p_target;
  };
  // Psi^(3) decreasing in beta: p(U_r) > p_target needs beta > 0
  if (p_target < U_r.p) {
    return expand_and_bisect(f, 0.0, +1.0, 1e-4, 1e6, "inverse_strength_from_pressure");
  }
  if (f(-delta_star_prime) < 0) {
    throw SolverError(ErrorCode::Unreachable, "inverse_strength_from_pressure: beyond extension");
  }
  double a = 0.0, b = -delta_star_prime, fa = f(0.0), fb = f(b);
  (void)fb;
  for (int it = 0; it < 200 && std::abs(b - a) > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fa * fm <= 0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace rarefan
