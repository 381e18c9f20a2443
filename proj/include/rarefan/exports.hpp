#pragma once

#include <string>

#include "rarefan/config.hpp"

namespace rarefan {

// Shortest decimal string that parses back to the same double (17 significant
// digits at most), for bit-exact reimport.
std::string format_double(double x);

struct SnapshotRow {
  double y_low = 0, y_high = 0;
  GasState state;
};

// One row per constant slab, the static-gas slab first with a -inf sentinel
// lower bound; slabs partition [g(x), y_max].
void export_snapshot(const FrontField& field, const std::string& path);
std::vector<SnapshotRow> import_snapshot(const std::string& path);

void export_events(const std::vector<InteractionRecord>& records, const std::string& path);

void export_glimm_trace(const std::vector<GlimmSnapshot>& trace, const std::string& path);

void export_diagram(const RunHistory& history, double x_max, const std::string& path);

}  // namespace rarefan
