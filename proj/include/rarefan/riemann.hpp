#pragma once

#include <vector>

#include "rarefan/wave_curves.hpp"

namespace rarefan {

struct WaveStrengths {
  double a1 = 0, a21 = 0, a22 = 0, a3 = 0;
};

struct RiemannSolution {
  WaveStrengths s;
  GasState mid1;  // Phi_1(a1; U_L)
  GasState mid2;  // Phi_2(a2; mid1)
  double residual = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  double fd_step = 1e-7;
  int max_iter = 60;
};

// Phi(a1, a2, a3; U_L): composite forward map, families applied 1 then 2 then 3.
GasState wave_chain(const GasState& U_L, const WaveStrengths& s, const GasParams& par);

RiemannSolution solve_riemann(const GasState& U_L, const GasState& U_R, const GasParams& par,
                              const NewtonOptions& opt = {});

struct BoundaryReflection {
  double beta3 = 0;   // Psi(0,0,beta3;U_r) has pressure p_bar
  GasState U_m;       // new state adjacent to the free boundary
  double k = 0;       // new boundary slope v_m/u_m
};

BoundaryReflection solve_boundary_riemann(const GasState& U_r, double p_bar, const GasParams& par);

// K_b1 at zero incoming strength: -k1(lambda1 - v/u) / (k3(lambda3 - v/u)).
double boundary_reflection_coefficient(const GasState& U_r, const GasParams& par);

struct BackgroundSolution {
  GasState U_plus, U_minus;
  double p_bar = 0;
  double p_star = 0;   // supersonic-persistence threshold
  double k_b = 0;      // boundary slope tan(theta_minus)
  double k1 = 0;       // lambda3(U_plus), upper fan edge
  double k2 = 0;       // lambda3(U_minus), lower fan edge
  double S_bar = 0;    // total fan strength in lambda3 parameter
  double tv_constant = 0;  // measured C in TV.U_b <= C |p_plus - p_minus|
  GasParams par;

  // Self-similar fan state at slope xi = y/x in (k2, k1).
  GasState fan_state(double xi) const;
};

BackgroundSolution background_solution(const GasState& U_plus, double p_bar, const GasParams& par);

enum class FrontKind { Rarefaction, Shock, Contact, NonPhysical };

// A front as produced by a Riemann solver, before it is placed in the field.
struct ProtoFront {
  int family = 0;  // 1, 2, 3 physical; 4 non-physical
  FrontKind kind = FrontKind::Contact;
  double speed = 0;
  GasState below, above;
  double alpha = 0;    // signed curve parameter; F2: alpha21; NP: strength eps
  double alpha2 = 0;   // F2: alpha22
  double strength() const { return std::abs(alpha) + std::abs(alpha2); }
};

// nu = ceil(alpha/delta) equal fronts; front k moves at lambda_j of its upper state.
std::vector<ProtoFront> split_rarefaction(const GasState& U_l, int family, double alpha,
                                          double delta, const GasParams& par);

// All outgoing fronts of the accurate solver between U_L (below) and U_R (above).
std::vector<ProtoFront> accurate_solver(const GasState& U_L, const GasState& U_R, double delta,
                                        const GasParams& par, const NewtonOptions& opt = {});

// Emits the fronts for a known wave chain without re-solving (used when the
// outgoing waves are given by construction, e.g. the simplified solver).
std::vector<ProtoFront> emit_wave_fronts(const GasState& U_L, const WaveStrengths& s, double delta,
                                         const GasParams& par);

struct SimplifiedOutcome {
  std::vector<ProtoFront> fronts;  // ordered by increasing slope, NP last
  double np_strength = 0;
};

// Case a: incoming j-wave beta (below, U_L->U_M) overtaken/overtaking an
// i-wave alpha (above, U_M->U_R), i <= j. The physical part re-composes the
// same parameters in canonical order toward the auxiliary state; the mismatch
// to U_R travels as one non-physical front at lambda_hat.
SimplifiedOutcome simplified_case_a(const GasState& U_L, const WaveParam& alpha_i, int i,
                                    const WaveParam& beta_j, int j, const GasState& U_R,
                                    double delta, double lambda_hat, const GasParams& par);

// Case b: non-physical front (U_L below, U_M above) meets an i-wave alpha
// (U_M -> U_R) from above; the physical front passes with identical parameter.
SimplifiedOutcome simplified_case_b(const GasState& U_L, const WaveParam& alpha_i,
                                    const GasState& U_R, double delta, double lambda_hat,
                                    const GasParams& par);

// Case c: 1-front hits the free boundary; the reflected 3-wave is replaced by
// a non-physical front, the boundary keeps its slope.
SimplifiedOutcome simplified_case_c(const GasState& U_r, double p_bar, double lambda_hat,
                                    const GasParams& par);

struct FanGeometry {
  double lambda_hat = 0;   // non-physical front speed
  double lambda1_star = 0; // pad between families 1 and 2
  double lambda3_star = 0; // pad between families 2 and 3
};

// Sampled extremes of the eigenvalues over D(U_plus, delta0) with the margins
// fixed in the module decisions.
FanGeometry fan_geometry(const GasState& U_plus, double p_bar, double delta0, const GasParams& par);

}  // namespace rarefan
