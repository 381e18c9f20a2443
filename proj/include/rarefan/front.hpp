#pragma once

#include <vector>

#include "rarefan/riemann.hpp"

namespace rarefan {

struct Front {
  long id = 0;
  int family = 0;  // 1, 2, 3 physical; 4 non-physical
  FrontKind kind = FrontKind::Contact;
  double y = 0;      // intercept at the owning field's x
  double speed = 0;  // dy/dx
  GasState below, above;
  double alpha = 0;   // F1/F3 signed parameter; F2: alpha21; NP: strength
  double alpha2 = 0;  // F2: alpha22
  int gen_order = 0;
  bool is_strong = false;  // 3-rarefaction front of generation order 0

  double strength() const { return std::abs(alpha) + std::abs(alpha2); }
  bool is_physical() const { return family != 4; }
  bool is_weak() const { return is_physical() && !is_strong; }
};

struct FreeBoundary {
  double y = 0;
  double k = 0;  // slope dy/dx
  GasState static_gas;
};

struct FrontField {
  double x = 0;
  std::vector<Front> fronts;  // ascending y; ties broken by ascending speed
  FreeBoundary boundary;
  GasState top_state;

  const GasState& bottom_state() const {
    return fronts.empty() ? top_state : fronts.front().below;
  }
};

struct InteractionRecord {
  double x = 0;
  int icase = 0;  // 1..6
  double E_delta = 0;
  bool accurate = false;
  std::vector<long> incoming, outgoing;
  double F_before = 0, F_after = 0;
  bool audit_pass = true;
  double audit_margin = 0;  // -(dF + E_delta/4); >= -tol when passing
};

}  // namespace rarefan
