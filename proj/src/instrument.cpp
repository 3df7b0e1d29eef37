// SPDX-License-Identifier: Apache-2.0

#include "storyboard/instrument.hpp"

#include <algorithm>

namespace storyboard {

bool is_instrumented(const AppModel& model) {
  const auto& acts = model.manifest.declared_activities;
  return std::all_of(acts.begin(), acts.end(), [](const ActivityDecl& a) { return a.exported; });
}

AppModel instrument(const AppModel& model) {
  if (is_instrumented(model)) return model;
  AppModel out = model;
  for (auto& a : out.manifest.declared_activities) a.exported = true;
  ++out.revision;
  return out;
}

}  // namespace storyboard
