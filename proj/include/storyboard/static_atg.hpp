// SPDX-License-Identifier: Apache-2.0
//
// Activity transition graph and its static extraction from the IR.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "storyboard/app_model.hpp"
#include "storyboard/call_graph.hpp"

namespace storyboard {

enum class Origin { Static, Dynamic };

struct Via {
  enum class Kind { Direct, InnerClass, Fragment, Component };
  Kind kind = Kind::Direct;
  std::string component;  // set iff kind == Component

  static Via direct() { return {}; }
  static Via inner_class() { return {Kind::InnerClass, {}}; }
  static Via fragment() { return {Kind::Fragment, {}}; }
  static Via tap(std::string id) { return {Kind::Component, std::move(id)}; }
  bool operator==(const Via&) const = default;
};

std::string to_string(Origin o);
std::string to_string(const Via& v);

struct TransitionPair {
  std::string source;
  std::string target;
  Origin origin = Origin::Static;
  Via via;

  bool operator==(const TransitionPair&) const = default;
};

using Edge = std::pair<std::string, std::string>;

class Atg {
 public:
  /// Inserts unless (source, target) is already present; the first origin
  /// and via seen for a pair are kept.
  bool add(TransitionPair p);
  bool contains(const std::string& source, const std::string& target) const;

  /// Pairs ordered by (source, target).
  std::vector<TransitionPair> pairs() const;
  std::set<Edge> edges() const;
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Fragment-originated edges (fragment -> activity) and fragment bindings
  /// (host -> fragment) awaiting merge. Empty once extraction finishes.
  const std::set<Edge>& pending_fragment_edges() const { return pending_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

  void add_pending(Edge e) { pending_.insert(std::move(e)); }
  void clear_pending() { pending_.clear(); }
  void note(std::string diagnostic) { diagnostics_.push_back(std::move(diagnostic)); }

  /// `source -> target [origin,via]` per line, sorted.
  std::string dump() const;

  bool operator==(const Atg&) const = default;

 private:
  std::map<Edge, TransitionPair> pairs_;
  std::set<Edge> pending_;
  std::vector<std::string> diagnostics_;
};

/// Parses the text produced by Atg::dump(). Throws std::runtime_error.
Atg parse_atg_dump(std::string_view text);

struct StartSite {
  const UnitDef* unit = nullptr;
  const MethodDef* method = nullptr;
  std::size_t index = 0;  // position of the StartActivity statement
};

/// Implicit-intent match: action equality, categories subset, data and
/// mime equality for each field the intent carries.
bool filter_matches(const IntentFilter& intent, const IntentFilter& filter);

/// Target of the intent started at `site`. Explicit targets are returned as
/// written; implicit ones resolve to the first matching activity in manifest
/// order.
std::optional<std::string> resolve_target(const StartSite& site, const AppModel& model);

Atg extract_static_atg(const AppModel& model, const CallGraph& cg);

}  // namespace storyboard
