// SPDX-License-Identifier: Apache-2.0

#include "storyboard/metrics.hpp"

#include <set>

namespace storyboard {

double coverage(const Atg& atg, const Manifest& manifest) {
  if (manifest.declared_activities.empty()) throw MetricError("coverage is undefined for an app with no activities");
  std::set<std::string> reached;
  for (const auto& p : atg.pairs()) {
    if (manifest.declares(p.source)) reached.insert(p.source);
    if (manifest.declares(p.target)) reached.insert(p.target);
  }
  if (const ActivityDecl* l = manifest.launcher()) reached.insert(l->name);
  return static_cast<double>(reached.size()) / static_cast<double>(manifest.declared_activities.size());
}

double launch_ratio(const ExplorationReport& report, const Manifest& manifest) {
  if (manifest.declared_activities.empty())
    throw MetricError("launch ratio is undefined for an app with no activities");
  std::size_t launched = 0;
  for (const auto& a : manifest.declared_activities) {
    auto it = report.outcomes.find(a.name);
    if (it != report.outcomes.end() && it->second.kind == ActivityOutcome::Kind::Launched) ++launched;
  }
  return static_cast<double>(launched) / static_cast<double>(manifest.declared_activities.size());
}

Similarity page_similarity(const Raster& a, const Raster& b) {
  if (a.width != b.width || a.height != b.height || a.cells.size() != b.cells.size())
    throw MetricError("raster dimensions differ");
  if (a.cells.empty()) return {};
  constexpr double kMax = kPaletteSize - 1;
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const double d = (static_cast<double>(a.cells[i]) - static_cast<double>(b.cells[i])) / kMax;
    abs_sum += d < 0 ? -d : d;
    sq_sum += d * d;
  }
  const double n = static_cast<double>(a.cells.size());
  return Similarity{1.0 - abs_sum / n, 1.0 - sq_sum / n};
}

}  // namespace storyboard
