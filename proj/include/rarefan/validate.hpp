#pragma once

#include "rarefan/tracking.hpp"

namespace rarefan {

struct FrontEntropy {
  long id = 0;
  int family = 0;
  FrontKind kind = FrontKind::Contact;
  double h = 0;
  bool ok = true;
};

// Per-front entropy residual h = ydot [eta] - [q_flux] with eta = -rho u S_phys,
// q_flux = -rho v S_phys. Shocks must produce entropy (h >= -tol), contacts and
// the free boundary are exact, rarefaction fronts carry an O(delta^2) defect,
// ghost fronts are controlled through their total strength.
struct EntropyReport {
  std::vector<FrontEntropy> fronts;
  double boundary_h = 0;
  bool boundary_exact = true;  // g' equals v/u of the adjacent state
  double tol_h = 1e-10;
  double rarefaction_bound = 0;  // C1 * delta^2 + tol_h
  double max_shock_deficit = 0;  // most negative shock h (0 when clean)
  double max_contact_abs = 0;
  double max_rarefaction_h = 0;
  double np_h_total = 0;
  double np_strength_total = 0;
  bool all_ok = true;
};

EntropyReport entropy_residuals(const FrontField& field, double delta, double c1_bound,
                                const GasParams& par, double tol_h = 1e-10);

// Weak-form residual of the history against a family of smooth compactly
// supported bumps. For a piecewise-constant field the domain, boundary and
// initial terms reduce exactly to line integrals of the jump mismatch
// ydot [W] - [H] along interior fronts; quadrature is Gauss-Legendre along
// each front segment.
struct WeakResidual {
  double max_residual = 0;
  double rms_residual = 0;
  int test_functions = 0;
};

WeakResidual weak_residual(const RunHistory& history, double x_max, const GasParams& par,
                           int grid = 5, double scale1 = 0.5, double scale2 = 1.0);

struct RegionMargins {
  double max_dI = 0;
  double max_dB = 0;
  double max_dA = 0;
  double pressure_excess = 0;  // how far outside [p_bar, p_plus]; <= 0 when inside
  bool inside = true;          // within the delta0 tube
};

RegionMargins check_invariant_region(const FrontField& field, const GasState& U_plus,
                                     double delta0, double p_bar, const GasParams& par);

// Exact L1(y) distance between two piecewise-constant slices at the same x.
double slice_l1_distance(const FrontField& a, const FrontField& b, double y_max);

struct ConvergenceRow {
  double delta_coarse = 0, delta_fine = 0;
  double l1_distance = 0;
  double boundary_slope_gap = 0;
};

}  // namespace rarefan
