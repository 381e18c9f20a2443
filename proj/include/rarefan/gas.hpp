#pragma once

#include <array>
#include <cmath>

#include "rarefan/errors.hpp"

namespace rarefan {

struct Vec4 {
  std::array<double, 4> d{};

  Vec4() = default;
  Vec4(double a, double b, double c, double e) : d{a, b, c, e} {}

  double& operator[](int i) { return d[static_cast<size_t>(i)]; }
  const double& operator[](int i) const { return d[static_cast<size_t>(i)]; }

  friend Vec4 operator+(const Vec4& a, const Vec4& b) {
    return Vec4(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]);
  }
  friend Vec4 operator-(const Vec4& a, const Vec4& b) {
    return Vec4(a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]);
  }
  friend Vec4 operator*(double s, const Vec4& a) {
    return Vec4(s * a[0], s * a[1], s * a[2], s * a[3]);
  }
};

inline double norm(const Vec4& a) {
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]);
}

struct GasParams {
  double gamma = 1.4;
  double kappa = 1.0;  // entropy-law constant, enters only through S_phys
  double c_v = 1.0;
};

// Primitive state U = (u, v, p, rho). Valid states have p > 0, rho > 0.
struct GasState {
  double u = 0;
  double v = 0;
  double p = 0;
  double rho = 0;

  Vec4 vec() const { return {u, v, p, rho}; }
  static GasState from_vec(const Vec4& w) { return {w[0], w[1], w[2], w[3]}; }
};

inline double distance(const GasState& a, const GasState& b) { return norm(a.vec() - b.vec()); }

double sonic_speed(const GasState& U, const GasParams& par);
inline double speed(const GasState& U) { return std::hypot(U.u, U.v); }
inline double flow_angle(const GasState& U) { return std::atan2(U.v, U.u); }
double bernoulli(const GasState& U, const GasParams& par);      // B = q^2 + 2c^2/(gamma-1)
double entropy_A(const GasState& U, const GasParams& par);      // A = p rho^-gamma
double specific_entropy(const GasState& U, const GasParams& par);  // c_v ln(A/kappa)
double mach(const GasState& U, const GasParams& par);
double mach_angle(const GasState& U, const GasParams& par);     // arcsin(c/q)
bool is_supersonic(const GasState& U, const GasParams& par);
void require_supersonic(const GasState& U, const GasParams& par, const char* where);
double total_energy(const GasState& U, const GasParams& par);

// Conserved x- and y-fluxes W(U), H(U) of the steady system.
Vec4 flux_x(const GasState& U, const GasParams& par);
Vec4 flux_y(const GasState& U, const GasParams& par);

// Characteristic slope dy/dx, j in {1,2,3}; requires u > c > 0 for j = 1,3.
double eigenvalue(const GasState& U, const GasParams& par, int j);
std::array<double, 3> eigenvalues(const GasState& U, const GasParams& par);

struct EigenStructure {
  std::array<double, 3> lambda;
  Vec4 r1, r3;    // normalized so grad(lambda_j) . r_j = 1
  Vec4 r21, r22;  // linearly degenerate pair
  double k1 = 0, k3 = 0;
};

double eigen_k(const GasState& U, const GasParams& par, int j);
Vec4 eigenvector(const GasState& U, const GasParams& par, int j);  // j = 1 or 3
EigenStructure eigenvectors(const GasState& U, const GasParams& par);

// Prandtl-Meyer-type integral I(q, B) = int sqrt(t^2-c^2)/(t c) dt with the
// lower limit fixed at q_sonic = sqrt((gamma-1) B / (gamma+1)), so I >= 0.
// Only differences of I are observable.
double pm_q_sonic(double B, const GasParams& par);
inline double pm_q_max(double B) { return std::sqrt(B); }
double pm_integral(double q, double B, const GasParams& par);
// Inverse on the same branch: the unique q in [q_sonic, q_max) with I(q,B) = value.
double pm_inverse(double value, double B, const GasParams& par);

// Perturbation domain D(U_plus, delta0): neighborhood of the 3-rarefaction
// curve through U_plus with pressure in (p_bar - delta0, p_plus + delta0).
bool in_invariant_region(const GasState& U, const GasState& U_plus, double delta0, double p_bar,
                         const GasParams& par);

struct InvariantDeviation {
  double d_I = 0;  // (I(q,B)+theta)(U) - (I(q,B)+theta)(U_ref)
  double d_B = 0;
  double d_A = 0;
};

InvariantDeviation riemann_invariant_deviation(const GasState& U, const GasState& U_ref,
                                               const GasParams& par);

}  // namespace rarefan
