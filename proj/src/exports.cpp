#include "rarefan/exports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

namespace rarefan {

std::string format_double(double x) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

void export_snapshot(const FrontField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::IoError, "cannot write " + path);
  out << "y_low,y_high,u,v,p,rho\n";
  auto row = [&](double lo, double hi, const GasState& s) {
    out << format_double(lo) << ',' << format_double(hi) << ',' << format_double(s.u) << ','
        << format_double(s.v) << ',' << format_double(s.p) << ',' << format_double(s.rho) << '\n';
  };
  const double g = field.boundary.y;
  double width = 1.0;
  if (field.fronts.size() >= 2) {
    width = std::max(1e-6, (field.fronts.back().y - field.fronts.front().y) /
                               static_cast<double>(field.fronts.size()));
  }
  const double y_max = (field.fronts.empty() ? g : field.fronts.back().y) + 3.0 * width;
  row(-std::numeric_limits<double>::infinity(), g, field.boundary.static_gas);
  double lo = g;
  for (const Front& f : field.fronts) {
    if (f.y > lo) {
      row(lo, f.y, f.below);
      lo = f.y;
    }
  }
  row(lo, y_max, field.top_state);
}

std::vector<SnapshotRow> import_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::IoError, "cannot read " + path);
  std::vector<SnapshotRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SnapshotRow r;
    double* cells[6] = {&r.y_low, &r.y_high, &r.state.u, &r.state.v, &r.state.p, &r.state.rho};
    size_t pos = 0;
    for (int c = 0; c < 6; ++c) {
      const size_t next = line.find(',', pos);
      *cells[c] = std::strtod(line.substr(pos, next - pos).c_str(), nullptr);
      pos = next == std::string::npos ? line.size() : next + 1;
    }
    rows.push_back(r);
  }
  return rows;
}

void export_events(const std::vector<InteractionRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::IoError, "cannot write " + path);
  for (const InteractionRecord& r : records) {
    nlohmann::json j;
    j["x"] = r.x;
    j["case"] = r.icase;
    j["E_delta"] = r.E_delta;
    j["solver"] = r.accurate ? "accurate" : "simplified";
    j["incoming"] = r.incoming;
    j["outgoing"] = r.outgoing;
    j["F_before"] = r.F_before;
    j["F_after"] = r.F_after;
    j["audit_pass"] = r.audit_pass;
    j["audit_margin"] = r.audit_margin;
    out << j.dump() << '\n';
  }
}

void export_glimm_trace(const std::vector<GlimmSnapshot>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::IoError, "cannot write " + path);
  out << "x,L1,L2,L3,L4,Q0,Q1,Q2,Q4,S,F1,F\n";
  for (const GlimmSnapshot& s : trace) {
    out << format_double(s.x) << ',' << format_double(s.L1) << ',' << format_double(s.L2) << ','
        << format_double(s.L3) << ',' << format_double(s.L4) << ',' << format_double(s.Q0) << ','
        << format_double(s.Q1) << ',' << format_double(s.Q2) << ',' << format_double(s.Q4) << ','
        << format_double(s.S) << ',' << format_double(s.F1) << ',' << format_double(s.F) << '\n';
  }
}

namespace {

struct Poly {
  int family = 0;
  bool strong = false;
  std::vector<std::pair<double, double>> pts;
};

const char* family_color(int family, bool strong) {
  if (family == 1) return "#1f77b4";
  if (family == 2) return "#2ca02c";
  if (family == 3) return strong ? "#d62728" : "#ff9896";
  return "#7f7f7f";
}

}  // namespace

void export_diagram(const RunHistory& history, double x_max, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::IoError, "cannot write " + path);
  if (history.checkpoints.empty()) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
    return;
  }

  std::map<long, Poly> polys;
  std::vector<std::pair<double, double>> wall;
  double y_min = 0, y_max = 1e-9;
  for (size_t s = 0; s < history.checkpoints.size(); ++s) {
    const FrontField& fld = history.checkpoints[s];
    const double x0 = fld.x;
    const double x1 =
        (s + 1 < history.checkpoints.size()) ? history.checkpoints[s + 1].x : x_max;
    wall.emplace_back(x0, fld.boundary.y);
    wall.emplace_back(x1, fld.boundary.y + fld.boundary.k * (x1 - x0));
    for (const Front& f : fld.fronts) {
      Poly& p = polys[f.id];
      p.family = f.family;
      p.strong = f.is_strong;
      if (p.pts.empty()) p.pts.emplace_back(x0, f.y);
      p.pts.emplace_back(x1, f.y + f.speed * (x1 - x0));
      y_min = std::min(y_min, f.y);
      y_max = std::max(y_max, f.y + f.speed * (x1 - x0));
    }
    y_min = std::min(y_min, wall.back().second);
  }

  const double W = 900, H = 600, pad = 40;
  auto X = [&](double x) { return pad + x / std::max(x_max, 1e-9) * (W - 2 * pad); };
  auto Y = [&](double y) { return H - pad - (y - y_min) / std::max(y_max - y_min, 1e-9) * (H - 2 * pad); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // shade between the lowest and highest strong fronts, slice by slice
  for (size_t s = 0; s < history.checkpoints.size(); ++s) {
    const FrontField& fld = history.checkpoints[s];
    const double x0 = fld.x;
    const double x1 =
        (s + 1 < history.checkpoints.size()) ? history.checkpoints[s + 1].x : x_max;
    const Front* lo = nullptr;
    const Front* hi = nullptr;
    for (const Front& f : fld.fronts) {
      if (!f.is_strong) continue;
      if (!lo) lo = &f;
      hi = &f;
    }
    if (!lo || lo == hi) continue;
    out << "<polygon points=\"" << X(x0) << ',' << Y(lo->y) << ' ' << X(x1) << ','
        << Y(lo->y + lo->speed * (x1 - x0)) << ' ' << X(x1) << ','
        << Y(hi->y + hi->speed * (x1 - x0)) << ' ' << X(x0) << ',' << Y(hi->y)
        << "\" fill=\"#d6272820\" stroke=\"none\"/>\n";
  }

  for (const auto& [id, p] : polys) {
    out << "<polyline fill=\"none\" stroke=\"" << family_color(p.family, p.strong) << "\""
        << (p.family == 4 ? " stroke-dasharray=\"6 4\"" : "")
        << " stroke-width=\"" << (p.strong ? 2.0 : 1.0) << "\" points=\"";
    for (const auto& [x, y] : p.pts) out << X(x) << ',' << Y(y) << ' ';
    out << "\"/>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"3\" points=\"";
  for (const auto& [x, y] : wall) out << X(x) << ',' << Y(y) << ' ';
  out << "\"/>\n</svg>\n";
}

}  // namespace rarefan
