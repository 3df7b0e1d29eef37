// SPDX-License-Identifier: Apache-2.0
//
// Method-level call graph over the statement IR.

#pragma once

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "storyboard/app_model.hpp"

namespace storyboard {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodId {
  std::string unit;
  std::string method;

  std::string str() const { return unit + "." + method; }
  auto operator<=>(const MethodId&) const = default;
};

class CallGraph {
 public:
  using Edge = std::pair<MethodId, MethodId>;

  /// Nodes in model order (unit order, then method order).
  const std::vector<MethodId>& nodes() const { return nodes_; }
  /// Edges sorted by (caller, callee).
  const std::vector<Edge>& edges() const { return edges_; }

  bool contains(const MethodId& m) const { return index_.count(m) != 0; }
  UnitKind unit_kind(const MethodId& m) const;

  /// Direct callees in statement order, each listed once.
  const std::vector<MethodId>& callees(const MethodId& m) const;
  /// Direct callers in node order.
  const std::vector<MethodId>& callers(const MethodId& m) const;

  /// `caller -> callee` per line, sorted.
  std::string dump() const;

 private:
  friend CallGraph build_call_graph(const AppModel& model);
  std::size_t at(const MethodId& m) const;

  std::vector<MethodId> nodes_;
  std::vector<UnitKind> kinds_;
  std::map<MethodId, std::size_t> index_;
  std::vector<std::vector<MethodId>> out_;
  std::vector<std::vector<MethodId>> in_;
  std::vector<Edge> edges_;
};

/// Edge a->b iff a's body contains Call(b). Throws AnalysisError when a call
/// names a method that does not exist.
CallGraph build_call_graph(const AppModel& model);

/// Every method that can reach `method` (including itself), in first-visit
/// breadth-first order.
std::vector<MethodId> backward_closure(const CallGraph& cg, const MethodId& method);

/// Activity units among the backward closure of `method`.
std::set<std::string> callers_of(const CallGraph& cg, const MethodId& method);

std::vector<MethodId> callees_of(const CallGraph& cg, const MethodId& method);

}  // namespace storyboard
