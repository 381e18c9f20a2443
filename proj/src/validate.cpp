#include "rarefan/validate.hpp"

#include <algorithm>
#include <cmath>

namespace rarefan {

namespace {

double eta_flux(const GasState& U, const GasParams& par) {
  return -U.rho * U.u * specific_entropy(U, par);
}

double q_flux(const GasState& U, const GasParams& par) {
  return -U.rho * U.v * specific_entropy(U, par);
}

}  // namespace

EntropyReport entropy_residuals(const FrontField& field, double delta, double c1_bound,
                                const GasParams& par, double tol_h) {
  EntropyReport rep;
  rep.tol_h = tol_h;
  rep.rarefaction_bound = c1_bound * delta * delta + tol_h;
  for (const Front& f : field.fronts) {
    FrontEntropy fe;
    fe.id = f.id;
    fe.family = f.family;
    fe.kind = f.kind;
    fe.h = f.speed * (eta_flux(f.above, par) - eta_flux(f.below, par)) -
           (q_flux(f.above, par) - q_flux(f.below, par));
    switch (f.kind) {
      case FrontKind::Shock:
        fe.ok = fe.h >= -tol_h;
        rep.max_shock_deficit = std::max(rep.max_shock_deficit, -fe.h);
        break;
      case FrontKind::Contact:
        fe.ok = std::abs(fe.h) <= tol_h;
        rep.max_contact_abs = std::max(rep.max_contact_abs, std::abs(fe.h));
        break;
      case FrontKind::Rarefaction:
        fe.ok = fe.h <= rep.rarefaction_bound;
        rep.max_rarefaction_h = std::max(rep.max_rarefaction_h, fe.h);
        break;
      case FrontKind::NonPhysical:
        rep.np_h_total += std::abs(fe.h);
        rep.np_strength_total += f.strength();
        fe.ok = true;
        break;
    }
    rep.all_ok = rep.all_ok && fe.ok;
    rep.fronts.push_back(fe);
  }
  // the static side carries no entropy flux; only the upper trace contributes
  const GasState& adj = field.bottom_state();
  rep.boundary_h = field.boundary.k * eta_flux(adj, par) - q_flux(adj, par);
  rep.boundary_exact = std::abs(field.boundary.k - adj.v / adj.u) < 1e-12;
  if (rep.boundary_exact) rep.all_ok = rep.all_ok && std::abs(rep.boundary_h) <= tol_h;
  return rep;
}

namespace {

// C_c^infinity bump on (-1, 1).
double bump(double t) {
  const double a = 1.0 - t * t;
  return a > 0 ? std::exp(-1.0 / a) : 0.0;
}

constexpr int kGL = 12;
// 12-point Gauss-Legendre nodes/weights on [-1, 1]
const double kGLx[kGL] = {-0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
                          -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
                          0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
                          0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
const double kGLw[kGL] = {0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
                          0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
                          0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                          0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

}  // namespace

WeakResidual weak_residual(const RunHistory& history, double x_max, const GasParams& par,
                           int grid, double scale1, double scale2) {
  WeakResidual out;
  if (history.checkpoints.empty()) return out;

  // test-function centers spread over the populated region
  double y_lo = 1e300, y_hi = -1e300;
  for (const FrontField& f : history.checkpoints) {
    if (f.fronts.empty()) continue;
    y_lo = std::min(y_lo, f.boundary.y);
    y_hi = std::max(y_hi, f.fronts.back().y);
  }
  if (y_lo > y_hi) return out;

  double sum2 = 0;
  for (double scale : {scale1, scale2}) {
    for (int gx = 0; gx < grid; ++gx) {
      for (int gy = 0; gy < grid; ++gy) {
        const double cx = x_max * (gx + 1.0) / (grid + 1.0);
        const double cy = y_lo + (y_hi - y_lo) * (gy + 0.5) / grid;
        const double rx = scale * x_max / (grid + 1.0) * 1.8;
        const double ry = scale * (y_hi - y_lo) / grid * 1.8;
        auto phi = [&](double x, double y) { return bump((x - cx) / rx) * bump((y - cy) / ry); };

        double m = 0;
        for (size_t s = 0; s + 1 <= history.checkpoints.size(); ++s) {
          const FrontField& fld = history.checkpoints[s];
          const double x0 = fld.x;
          const double x1 = (s + 1 < history.checkpoints.size())
                                ? history.checkpoints[s + 1].x
                                : x_max;
          const double a = std::max(x0, cx - rx);
          const double b = std::min(x1, cx + rx);
          if (a >= b) continue;
          for (const Front& f : fld.fronts) {
            const Vec4 dW = flux_x(f.above, par) - flux_x(f.below, par);
            const Vec4 dH = flux_y(f.above, par) - flux_y(f.below, par);
            Vec4 mis = f.speed * dW - dH;
            double m_f = 0;
            for (int g = 0; g < kGL; ++g) {
              const double x = 0.5 * (a + b) + 0.5 * (b - a) * kGLx[g];
              const double y = f.y + f.speed * (x - x0);
              m_f += kGLw[g] * phi(x, y);
            }
            m_f *= 0.5 * (b - a);
            // the four components are tested with the same scalar bump
            m += m_f * (mis[0] + mis[1] + mis[2] + mis[3]);
          }
        }
        out.max_residual = std::max(out.max_residual, std::abs(m));
        sum2 += m * m;
        ++out.test_functions;
      }
    }
  }
  out.rms_residual = std::sqrt(sum2 / std::max(1, out.test_functions));
  return out;
}

RegionMargins check_invariant_region(const FrontField& field, const GasState& U_plus,
                                     double delta0, double p_bar, const GasParams& par) {
  RegionMargins m;
  auto visit = [&](const GasState& U) {
    const InvariantDeviation d = riemann_invariant_deviation(U, U_plus, par);
    m.max_dI = std::max(m.max_dI, std::abs(d.d_I));
    m.max_dB = std::max(m.max_dB, std::abs(d.d_B));
    m.max_dA = std::max(m.max_dA, std::abs(d.d_A));
    const double excess = std::max(p_bar - U.p, U.p - U_plus.p);
    m.pressure_excess = std::max(m.pressure_excess, excess);
  };
  visit(field.bottom_state());
  for (const Front& f : field.fronts) visit(f.above);
  m.inside = m.max_dI < delta0 && m.max_dB < delta0 && m.max_dA < delta0 &&
             m.pressure_excess < delta0;
  return m;
}

double slice_l1_distance(const FrontField& a, const FrontField& b, double y_max) {
  // merge both staircase partitions over [max(g_a, g_b), y_max]
  std::vector<double> cuts;
  const double y_lo = std::max(a.boundary.y, b.boundary.y);
  cuts.push_back(y_lo);
  for (const Front& f : a.fronts) {
    if (f.y > y_lo && f.y < y_max) cuts.push_back(f.y);
  }
  for (const Front& f : b.fronts) {
    if (f.y > y_lo && f.y < y_max) cuts.push_back(f.y);
  }
  cuts.push_back(y_max);
  std::sort(cuts.begin(), cuts.end());

  auto state_at = [](const FrontField& fld, double y) -> const GasState& {
    for (const Front& f : fld.fronts) {
      if (y < f.y) return f.below;
    }
    return fld.top_state;
  };

  double dist = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    dist += distance(state_at(a, mid), state_at(b, mid)) * (cuts[k + 1] - cuts[k]);
  }
  return dist;
}

}  // namespace rarefan
