// SPDX-License-Identifier: Apache-2.0

#include "storyboard/explore.hpp"

#include <deque>
#include <set>

namespace storyboard {

std::string to_string(ActivityOutcome::Kind k) {
  switch (k) {
    case ActivityOutcome::Kind::Launched: return "launched";
    case ActivityOutcome::Kind::Crashed: return "crashed";
    case ActivityOutcome::Kind::Unreachable: return "unreachable";
  }
  return "?";
}

std::size_t ExplorationReport::launched_count() const {
  std::size_t n = 0;
  for (const auto& [act, o] : outcomes) n += o.kind == ActivityOutcome::Kind::Launched;
  return n;
}

LaunchCommand synthesize_command(const std::string& activity, const ParamSet& params, const DummyValues& dummies) {
  LaunchCommand cmd{activity, {}};
  for (const auto& e : params.extras) cmd.extras.push_back(dummies.literal_for(activity, e.key, e.type));
  return cmd;
}

namespace {

bool has_dialog(const Device& device) { return device.state().interstitial.has_value(); }

// Answers a permission dialog with ALLOW if one is showing.
LaunchOutcome answer_prompt(Device& device, LaunchOutcome o, PhaseCounters& counters) {
  if (has_dialog(device) && dump_shows_permission_prompt(device.dump_layout())) {
    ++counters.permission_grants;
    ++counters.taps;
    o = device.tap("permission_allow_button");
  }
  return o;
}

bool shows_crash(const Device& device) { return has_dialog(device) && dump_shows_crash(device.dump_layout()); }

// Fresh launch of `cmd` followed by `path` taps; true if a page is on top.
bool replay(Device& device, const LaunchCommand& cmd, const std::vector<std::string>& path, PhaseCounters& counters) {
  device.force_stop();
  ++counters.force_stops;
  ++counters.launches;
  answer_prompt(device, device.launch(cmd), counters);
  for (const auto& id : path) {
    if (has_dialog(device) || !device.top_entry()) return false;
    ++counters.taps;
    answer_prompt(device, device.tap(id), counters);
  }
  return !has_dialog(device) && device.top_entry() != nullptr;
}

}  // namespace

ExplorationReport render_all(const AppModel& model, const IccTable& icc, Device& device,
                             const std::vector<std::string>& order) {
  ExplorationReport report;
  PhaseCounters& counters = report.timings["render"];
  const DummyValues dummies(device.app(), device.seed());
  const std::vector<std::string> acts = order.empty() ? model.activity_names() : order;

  for (const auto& act : acts) {
    device.force_stop();
    ++counters.force_stops;
    const LaunchCommand cmd = synthesize_command(act, icc.of(act), dummies);
    ++counters.launches;
    LaunchOutcome o;
    try {
      o = answer_prompt(device, device.launch(cmd), counters);
    } catch (const SecurityError& e) {
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Unreachable, e.what()};
      continue;
    }

    if (shows_crash(device)) {
      ++counters.crashes;
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Crashed, o.cause};
      device.force_stop();
      ++counters.force_stops;
      continue;
    }
    if (has_dialog(device)) {
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Unreachable, "permission not granted"};
      continue;
    }
    const auto actual = device.top_activity();
    const StackEntry* top = device.top_entry();
    if (!actual || !top) {
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Unreachable, "nothing on screen"};
      continue;
    }
    if (*actual == act)
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Launched, {}};
    else
      report.outcomes[act] = ActivityOutcome{ActivityOutcome::Kind::Unreachable, "redirected to " + *actual};
    if (report.pages.emplace(*actual, top->page).second) report.page_commands.emplace(*actual, cmd);
  }
  return report;
}

std::vector<TransitionPair> explore_components(const AppModel& model, ExplorationReport& report, Device& device,
                                               const Atg& current, int depth) {
  (void)model;
  PhaseCounters& counters = report.timings["explore"];
  std::vector<TransitionPair> found;
  std::set<Edge> known = current.edges();

  for (const auto& [page_name, cmd] : report.page_commands) {
    std::deque<std::vector<std::string>> queue{{}};
    std::set<std::string> seen{page_name};
    while (!queue.empty()) {
      std::vector<std::string> path = std::move(queue.front());
      queue.pop_front();
      if (!replay(device, cmd, path, counters)) continue;
      const std::string here = device.top_entry()->activity;
      std::vector<std::string> ids;
      for (const auto& c : device.top_entry()->page.components) {
        const Node* n = device.top_entry()->page.layout_dump.find(c.id);
        if (n && n->clickable && is_interactive(*n)) ids.push_back(c.id);
      }
      for (const auto& id : ids) {
        if (!replay(device, cmd, path, counters)) break;
        const std::size_t before = device.state().back_stack.size();
        ++counters.taps;
        answer_prompt(device, device.tap(id), counters);
        if (shows_crash(device)) {
          ++counters.crashes;
          continue;
        }
        const auto actual = device.top_activity();
        if (has_dialog(device) || !actual || device.state().back_stack.size() != before + 1) continue;
        if (known.insert(Edge{here, *actual}).second)
          found.push_back(TransitionPair{here, *actual, Origin::Dynamic, Via::tap(id)});
        if (static_cast<int>(path.size()) + 1 < depth && seen.insert(*actual).second) {
          auto next = path;
          next.push_back(id);
          queue.push_back(std::move(next));
        }
      }
    }
  }
  device.force_stop();
  report.dynamic_pairs = found;
  return found;
}

Atg hybrid_atg(const Atg& static_atg, const std::vector<TransitionPair>& dynamic) {
  Atg out = static_atg;
  for (const auto& p : dynamic) out.add(p);
  return out;
}

}  // namespace storyboard
