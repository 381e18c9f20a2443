#include "rarefan/gas.hpp"

#include <algorithm>
#include <cmath>

namespace rarefan {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SubsonicState: return "SubsonicState";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::LeftSupersonicLost: return "LeftSupersonicLost";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::EntropyViolation: return "EntropyViolation";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::PressureOutOfRange: return "PressureOutOfRange";
    case ErrorCode::TVTooLarge: return "TVTooLarge";
    case ErrorCode::UnclassifiableGeometry: return "UnclassifiableGeometry";
    case ErrorCode::AuditFailure: return "AuditFailure";
    case ErrorCode::ConstantsInvalid: return "ConstantsInvalid";
    case ErrorCode::GateViolation: return "GateViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

double sonic_speed(const GasState& U, const GasParams& par) {
  return std::sqrt(par.gamma * U.p / U.rho);
}

double bernoulli(const GasState& U, const GasParams& par) {
  const double c = sonic_speed(U, par);
  return U.u * U.u + U.v * U.v + 2.0 * c * c / (par.gamma - 1.0);
}

double entropy_A(const GasState& U, const GasParams& par) {
  return U.p * std::pow(U.rho, -par.gamma);
}

double specific_entropy(const GasState& U, const GasParams& par) {
  return par.c_v * std::log(entropy_A(U, par) / par.kappa);
}

double mach(const GasState& U, const GasParams& par) { return speed(U) / sonic_speed(U, par); }

double mach_angle(const GasState& U, const GasParams& par) {
  return std::asin(sonic_speed(U, par) / speed(U));
}

bool is_supersonic(const GasState& U, const GasParams& par) {
  return U.p > 0 && U.rho > 0 && U.u > sonic_speed(U, par);
}

void require_supersonic(const GasState& U, const GasParams& par, const char* where) {
  if (!is_supersonic(U, par)) {
    throw SolverError(ErrorCode::SubsonicState, std::string(where) + ": u <= c or invalid state");
  }
}

double total_energy(const GasState& U, const GasParams& par) {
  return 0.5 * (U.u * U.u + U.v * U.v) + U.p / ((par.gamma - 1.0) * U.rho);
}

Vec4 flux_x(const GasState& U, const GasParams& par) {
  const double ht = total_energy(U, par) + U.p / U.rho;
  return {U.rho * U.u, U.rho * U.u * U.u + U.p, U.rho * U.u * U.v, U.rho * U.u * ht};
}

Vec4 flux_y(const GasState& U, const GasParams& par) {
  const double ht = total_energy(U, par) + U.p / U.rho;
  return {U.rho * U.v, U.rho * U.u * U.v, U.rho * U.v * U.v + U.p, U.rho * U.v * ht};
}

double eigenvalue(const GasState& U, const GasParams& par, int j) {
  if (j == 2) return U.v / U.u;
  require_supersonic(U, par, "eigenvalue");
  const double c = sonic_speed(U, par);
  const double q2 = U.u * U.u + U.v * U.v;
  const double root = std::sqrt(q2 - c * c);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  return (U.u * U.v + sgn * c * root) / (U.u * U.u - c * c);
}

std::array<double, 3> eigenvalues(const GasState& U, const GasParams& par) {
  return {eigenvalue(U, par, 1), eigenvalue(U, par, 2), eigenvalue(U, par, 3)};
}

double eigen_k(const GasState& U, const GasParams& par, int j) {
  const double c = sonic_speed(U, par);
  const double q = speed(U);
  const double th = flow_angle(U);
  const double tma = mach_angle(U, par);
  const double sgn = (j == 1) ? -1.0 : 1.0;
  const double co = std::cos(th + sgn * tma);
  return 2.0 * std::sqrt(q * q - c * c) * co * co * co / (par.gamma + 1.0);
}

Vec4 eigenvector(const GasState& U, const GasParams& par, int j) {
  const double l = eigenvalue(U, par, j);
  const double k = eigen_k(U, par, j);
  const double c2 = par.gamma * U.p / U.rho;
  const double m = U.rho * (l * U.u - U.v);
  return {-k * l, k, k * m, k * m / c2};
}

EigenStructure eigenvectors(const GasState& U, const GasParams& par) {
  require_supersonic(U, par, "eigenvectors");
  EigenStructure e;
  e.lambda = eigenvalues(U, par);
  e.r1 = eigenvector(U, par, 1);
  e.r3 = eigenvector(U, par, 3);
  e.r21 = {U.u, U.v, 0.0, 0.0};
  e.r22 = {0.0, 0.0, 0.0, U.rho};
  e.k1 = eigen_k(U, par, 1);
  e.k3 = eigen_k(U, par, 3);
  return e;
}

double pm_q_sonic(double B, const GasParams& par) {
  return std::sqrt((par.gamma - 1.0) * B / (par.gamma + 1.0));
}

double pm_integral(double q, double B, const GasParams& par) {
  const double g = par.gamma;
  const double qs = pm_q_sonic(B, par);
  const double qmax = pm_q_max(B);
  if (q < qs * (1.0 - 1e-12) || q >= qmax) {
    throw SolverError(ErrorCode::OutOfRange, "pm_integral: q outside [q_sonic, q_max)");
  }
  double num = (g + 1.0) * q * q - (g - 1.0) * B;
  num = std::max(num, 0.0);
  const double rest = B - q * q;
  return std::sqrt((g + 1.0) / (g - 1.0)) * std::atan(std::sqrt(num / ((g + 1.0) * rest))) -
         std::atan(std::sqrt(num / ((g - 1.0) * rest)));
}

double pm_inverse(double value, double B, const GasParams& par) {
  const double qs = pm_q_sonic(B, par);
  const double qmax = pm_q_max(B);
  if (value < 0) throw SolverError(ErrorCode::OutOfRange, "pm_inverse: negative value");
  double lo = qs, hi = qmax * (1.0 - 1e-14);
  if (value > pm_integral(hi, B, par)) {
    throw SolverError(ErrorCode::OutOfRange, "pm_inverse: value beyond limit speed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pm_integral(mid, B, par) < value) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16 * qmax) break;
  }
  return 0.5 * (lo + hi);
}

bool in_invariant_region(const GasState& U, const GasState& U_plus, double delta0, double p_bar,
                         const GasParams& par) {
  if (!is_supersonic(U, par)) return false;
  const InvariantDeviation d = riemann_invariant_deviation(U, U_plus, par);
  return std::abs(d.d_I) < delta0 && std::abs(d.d_B) < delta0 && std::abs(d.d_A) < delta0 &&
         U.p > p_bar - delta0 && U.p < U_plus.p + delta0;
}

InvariantDeviation riemann_invariant_deviation(const GasState& U, const GasState& U_ref,
                                               const GasParams& par) {
  const double B = bernoulli(U, par);
  const double Br = bernoulli(U_ref, par);
  InvariantDeviation d;
  d.d_I = (pm_integral(speed(U), B, par) + flow_angle(U)) -
          (pm_integral(speed(U_ref), Br, par) + flow_angle(U_ref));
  d.d_B = B - Br;
  d.d_A = entropy_A(U, par) - entropy_A(U_ref, par);
  return d;
}

}  // namespace rarefan
