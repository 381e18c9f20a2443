#pragma once

#include <utility>

#include "rarefan/gas.hpp"

namespace rarefan {

enum class WaveFamily { F1, F2Vortex, F2Entropy, F3, NonPhysical };

// Curve parameter for one elementary wave. F1/F3: signed alpha (>=0 rarefaction,
// <0 shock). F2 carries the (alpha21, alpha22) pair with strength |a21|+|a22|.
struct WaveParam {
  WaveFamily family = WaveFamily::F3;
  double alpha = 0.0;
  double alpha22 = 0.0;  // F2 only

  double strength() const { return std::abs(alpha) + std::abs(alpha22); }
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
};

// Forward j-rarefaction: integrates dU/dalpha = r_j(U) from 0 to alpha >= 0
// with the adaptive RK45 pair, re-projecting onto the invariant manifold
// (I -+ theta, B, A constant) after each accepted step. lambda_j grows at unit
// rate by the eigenvector normalization.
GasState rarefaction_forward(const GasState& U_l, int family, double alpha, const GasParams& par,
                             const OdeOptions& opt = {});

// Backward variant along the inverse curve: dU/dsigma = -r_j.
GasState rarefaction_inverse(const GasState& U_r, int family, double alpha, const GasParams& par,
                             const OdeOptions& opt = {});

// Same curve by its first integrals: state at lambda_j = lambda_j(U0) + alpha,
// solved from the conserved (I -+ theta, B, A). Accepts either sign of alpha
// (the formal smooth extension for alpha < 0). Used by the background fan and
// as the cross-route check for the ODE path.
GasState rarefaction_curve_state(const GasState& U0, int family, double alpha,
                                 const GasParams& par);

struct ShockResult {
  GasState state;
  double slope = 0.0;  // s_j
};

// Forward j-shock branch at alpha < 0, parametrized as the continuation of the
// lambda_j-parametrization: lambda_j(U_r) = lambda_j(U_l) + alpha. Newton on
// the density ratio rho_r/rho_l, acoustic initial guess.
ShockResult shock_forward(const GasState& U_l, int family, double alpha, const GasParams& par);

// Inverse j-shock branch: the left state with lambda_j(U_r) - lambda_j(U_l) = alpha < 0,
// from the Rankine-Hugoniot relations organized around U_r.
ShockResult shock_inverse(const GasState& U_r, int family, double alpha, const GasParams& par);

// C21 then C22: u,v scaled by e^{a21}; rho scaled by e^{a22}; p, theta fixed.
GasState contact_forward(const GasState& U_l, double alpha21, double alpha22);

GasState wave_forward(const GasState& U_l, const WaveParam& w, const GasParams& par);
GasState wave_inverse(const GasState& U_r, const WaveParam& w, const GasParams& par);

struct PressureInversion {
  double alpha = 0.0;
  double c1 = 0.0;  // min |dp/dalpha| over the traversed range
  double c2 = 0.0;  // max |dp/dalpha|
};

// The unique alpha3 with Phi_3^(3)(alpha3; U_l) = p_target, by monotone
// bracketing (Lemma of the strictly increasing pressure). The shock-side
// extension is limited to alpha3 >= -delta_star_prime.
PressureInversion strength_from_pressure_ex(const GasState& U_l, double p_target,
                                            const GasParams& par,
                                            double delta_star_prime = 0.05);
double strength_from_pressure(const GasState& U_l, double p_target, const GasParams& par,
                              double delta_star_prime = 0.05);

// beta3 with Psi^(3)(0,0,beta3; U_r) = p_target (pressure decreasing in beta3).
double inverse_strength_from_pressure(const GasState& U_r, double p_target, const GasParams& par,
                                      double delta_star_prime = 0.05);

}  // namespace rarefan
