// SPDX-License-Identifier: Apache-2.0
//
// Deterministic virtual device. Executes an installed AppModel: direct
// activity launches with extras, a back stack, permission and login gates,
// crash dialogs, component taps, layout dumps and page rasters.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "storyboard/app_model.hpp"
#include "storyboard/call_graph.hpp"
#include "storyboard/raster.hpp"
#include "storyboard/static_atg.hpp"

namespace storyboard {

class DeviceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an external launch targets a non-exported activity.
class SecurityError : public DeviceError {
 public:
  using DeviceError::DeviceError;
};

inline constexpr std::string_view kCrashCause = "NullPointerException";

struct LaunchCommand {
  std::string target;
  std::vector<ExtraLiteral> extras;
  bool operator==(const LaunchCommand&) const = default;
};

/// `am start -n pkg/pkg.Target --ei key 2 --es key Alice ...`
std::string to_am_command(const std::string& package, const LaunchCommand& cmd);

struct Component {
  std::string id;
  ComponentType type = ComponentType::Container;
  bool clickable = false;
  Rect bounds;
  std::string label;
  bool operator==(const Component&) const = default;
};

/// Leaves of the tree plus any clickable inner node, in document order.
std::vector<Component> list_components(const LayoutTree& layout);

struct RenderedPage {
  std::string activity;
  LayoutTree layout_dump;
  Raster raster;
  std::vector<Component> components;
  bool operator==(const RenderedPage&) const = default;
};

enum class LaunchStatus { Rendered, Crashed, PermissionPrompt, Redirected, Dismissed };

std::string to_string(LaunchStatus s);

struct LaunchOutcome {
  LaunchStatus status = LaunchStatus::Rendered;
  std::string cause;                             // Crashed only
  std::optional<std::string> actual_activity;    // back-stack top after settling
  std::optional<RenderedPage> page;              // Rendered and Redirected

  std::string describe() const;
};

/// Keyword scans used to classify a dumped layout.
bool dump_shows_crash(const LayoutTree& dump);
bool dump_shows_permission_prompt(const LayoutTree& dump);

struct SessionEvent {
  std::uint64_t ts = 0;
  std::string op;
  std::string args;
  std::string outcome;
  bool operator==(const SessionEvent&) const = default;
};

struct StackEntry {
  std::string activity;
  std::vector<ExtraLiteral> extras;
  std::set<std::string> attached_fragments;
  RenderedPage page;
};

struct Interstitial {
  enum class Kind { Crash, Permission };
  Kind kind = Kind::Crash;
  LayoutTree tree;
  std::string permission;
  std::optional<LaunchCommand> pending;  // retried after ALLOW
  bool pending_external = false;
};

struct DeviceState {
  std::optional<AppModel> installed;
  std::vector<StackEntry> back_stack;
  std::set<std::string> granted_permissions;
  bool logged_in = false;
  std::vector<SessionEvent> event_log;
  std::uint64_t rng_seed = 0;
  std::optional<Interstitial> interstitial;
};

/// Synthesizes launch values: layout literals first (seeded pick), then the
/// fixed table Integer 2, String "Alice", Boolean true, Float 1.0.
class DummyValues {
 public:
  DummyValues(const AppModel& model, std::uint64_t seed);

  BasicValue value_for(BasicType type, const std::string& activity, const std::string& key) const;
  ExtraLiteral literal_for(const std::string& activity, const std::string& key, const ExtraType& type) const;

 private:
  std::uint64_t seed_;
  std::map<BasicType, std::vector<BasicValue>> pools_;
};

struct DeviceOptions {
  /// Fill every required extra the launch command lacks. Ground-truth runs
  /// only; normal sessions see exactly the extras they were given.
  bool satisfy_required_extras = false;
};

/// A launch performed by app code while a method was being invoked.
struct CodeLaunch {
  std::string source;
  std::string requested;
  LaunchOutcome outcome;
};

class Device {
 public:
  explicit Device(std::uint64_t seed = 0, DeviceOptions options = {});

  /// Replaces any installed app; clears stack, permissions, login and
  /// dialogs. The seed is kept.
  void install(const AppModel& model);

  /// External launch (am start). Throws SecurityError for a non-exported,
  /// non-launcher target and DeviceError for an undeclared one.
  LaunchOutcome launch(const LaunchCommand& cmd);

  /// Empties the back stack and closes dialogs. Permissions and login are
  /// device-level and survive.
  void force_stop();

  LaunchOutcome tap(std::string_view component_id);

  /// Pops the top activity, or closes the open dialog.
  void press_back();

  /// Runs `method` in the context of the foreground activity, following calls.
  /// Fragment transactions attach fragments to that activity; each started
  /// intent is launched internally and reported.
  std::vector<CodeLaunch> invoke(const MethodId& method);

  LayoutTree dump_layout() const;
  std::optional<std::string> top_activity() const;
  const StackEntry* top_entry() const;

  void grant_permission(const std::string& permission);
  void set_logged_in(bool logged_in);

  const DeviceState& state() const { return state_; }
  const AppModel& app() const;
  std::uint64_t seed() const { return state_.rng_seed; }
  /// `ts op args -> outcome` per line.
  std::string session_log() const;

 private:
  LaunchOutcome start(const LaunchCommand& cmd, bool external);
  RenderedPage render(const std::string& activity, const std::vector<ExtraLiteral>& extras) const;
  void log(std::string op, std::string args, std::string outcome);
  LaunchOutcome settle(LaunchStatus status, std::string cause = {});
  std::optional<std::string> resolve(const stmt::NewIntent& intent) const;
  void run_method(const MethodId& method, std::size_t context, std::vector<MethodId>& call_stack,
                  std::vector<CodeLaunch>& out);

  DeviceState state_;
  DeviceOptions options_;
  std::optional<DummyValues> dummies_;
};

/// Ground truth: with login forced, all permissions granted and every
/// required extra satisfied, launches each activity, invokes every method
/// that runs in its context, and taps every click path up to `max_depth`.
struct ExhaustiveOptions {
  int max_depth = 6;
  int command_budget = 10000;
  std::uint64_t seed = 0;
};

Atg run_exhaustive(const AppModel& model, const ExhaustiveOptions& options = {});

/// Methods that execute on behalf of `activity`: its own, those of inner
/// classes nested in it, and those of the attached fragments (and their
/// inner classes).
std::vector<MethodId> context_methods(const AppModel& model, const std::string& activity,
                                      const std::set<std::string>& attached_fragments);

}  // namespace storyboard
