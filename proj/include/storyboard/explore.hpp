// SPDX-License-Identifier: Apache-2.0
//
// Hybrid exploration: render every activity on the device with synthesized
// ICC values, then tap interactive components to find transitions the
// static pass cannot see.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "storyboard/app_model.hpp"
#include "storyboard/device.hpp"
#include "storyboard/icc.hpp"
#include "storyboard/static_atg.hpp"

namespace storyboard {

struct ActivityOutcome {
  enum class Kind { Launched, Crashed, Unreachable };
  Kind kind = Kind::Unreachable;
  std::string detail;  // crash cause or reason
  bool operator==(const ActivityOutcome&) const = default;
};

std::string to_string(ActivityOutcome::Kind k);

struct PhaseCounters {
  int launches = 0;
  int taps = 0;
  int force_stops = 0;
  int permission_grants = 0;
  int crashes = 0;
  bool operator==(const PhaseCounters&) const = default;
};

struct ExplorationReport {
  std::map<std::string, ActivityOutcome> outcomes;     // by requested activity
  std::map<std::string, RenderedPage> pages;           // by actual activity
  std::map<std::string, LaunchCommand> page_commands;  // command that produced each page
  std::vector<TransitionPair> dynamic_pairs;
  std::map<std::string, PhaseCounters> timings;        // "render", "explore"

  std::size_t launched_count() const;
};

/// Launch command carrying a dummy value for every extracted extra.
LaunchCommand synthesize_command(const std::string& activity, const ParamSet& params, const DummyValues& dummies);

/// Launches each activity of `order` (manifest order when empty) from a fresh
/// state. Permission dialogs are answered ALLOW once; crashes and dialogs are
/// recognized from the dumped layout; pages are filed under the activity the
/// device reports on top.
ExplorationReport render_all(const AppModel& model, const IccTable& icc, Device& device,
                             const std::vector<std::string>& order = {});

/// Taps every interactive component of every rendered page, once each, from a
/// fresh launch of that page. With depth > 1 the pages reached by taps are
/// explored as well. Returns pairs not already in `current`.
std::vector<TransitionPair> explore_components(const AppModel& model, ExplorationReport& report, Device& device,
                                               const Atg& current, int depth = 1);

/// Union; a pair already present keeps its static origin.
Atg hybrid_atg(const Atg& static_atg, const std::vector<TransitionPair>& dynamic);

}  // namespace storyboard
