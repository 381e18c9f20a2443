#pragma once

// Independent reference computations used only by tests. These deliberately
// avoid the library's code paths: classical Prandtl-Meyer/isentropic algebra,
// adaptive quadrature, finite differences, and raw Rankine-Hugoniot residuals.

#include <cmath>
#include <functional>

#include "rarefan/gas.hpp"

namespace oracle {

// Classical Prandtl-Meyer function nu(M).
inline double prandtl_meyer(double M, double gamma) {
  const double a = std::sqrt((gamma + 1.0) / (gamma - 1.0));
  return a * std::atan(std::sqrt((gamma - 1.0) * (M * M - 1.0) / (gamma + 1.0))) -
         std::atan(std::sqrt(M * M - 1.0));
}

// Mach number after an isentropic change of pressure at constant stagnation state:
// p/p0 = ((1 + (g-1)/2 M0^2)/(1 + (g-1)/2 M^2))^(g/(g-1)).
inline double isentropic_mach_at_pressure(double M0, double p_ratio, double gamma) {
  const double e = (gamma - 1.0) / gamma;
  const double t0 = 1.0 + 0.5 * (gamma - 1.0) * M0 * M0;
  const double t = t0 / std::pow(p_ratio, e);
  return std::sqrt((t - 1.0) * 2.0 / (gamma - 1.0));
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double a_, double b_, double fa_, double fm_, double fb_, double whole, double tol_,
          int depth_) -> double {
    const double m_ = 0.5 * (a_ + b_);
    const double lm = 0.5 * (a_ + m_), rm = 0.5 * (m_ + b_);
    const double flm = f(lm), frm = f(rm);
    const double left = (m_ - a_) / 6.0 * (fa_ + 4.0 * flm + fm_);
    const double right = (b_ - m_) / 6.0 * (fm_ + 4.0 * frm + fb_);
    if (depth_ <= 0 || std::abs(left + right - whole) < 15.0 * tol_) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(a_, m_, fa_, flm, fm_, left, 0.5 * tol_, depth_ - 1) +
           rec(m_, b_, fm_, frm, fb_, right, 0.5 * tol_, depth_ - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

// Central finite-difference gradient of a scalar of the state.
inline rarefan::Vec4 fd_gradient(const std::function<double(const rarefan::GasState&)>& f,
                                 const rarefan::GasState& U, double h_rel = 1e-6) {
  rarefan::Vec4 g{};
  const rarefan::Vec4 base = U.vec();
  for (int i = 0; i < 4; ++i) {
    const double h = h_rel * std::max(1.0, std::abs(base[i]));
    rarefan::Vec4 up = base, dn = base;
    up[i] += h;
    dn[i] -= h;
    g[i] = (f(rarefan::GasState::from_vec(up)) - f(rarefan::GasState::from_vec(dn))) / (2.0 * h);
  }
  return g;
}

inline double dot(const rarefan::Vec4& a, const rarefan::Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Max-norm residual of the full Rankine-Hugoniot conditions s[W] = [H],
// evaluated from the conservative fluxes directly.
inline double rh_residual(const rarefan::GasState& left, const rarefan::GasState& right, double s,
                          const rarefan::GasParams& par) {
  const rarefan::Vec4 dW = rarefan::flux_x(right, par) - rarefan::flux_x(left, par);
  const rarefan::Vec4 dH = rarefan::flux_y(right, par) - rarefan::flux_y(left, par);
  double r = 0;
  for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(s * dW[i] - dH[i]));
  return r;
}

}  // namespace oracle
