// SPDX-License-Identifier: Apache-2.0

#include "storyboard/call_graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace storyboard {

std::size_t CallGraph::at(const MethodId& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) throw AnalysisError("unknown method " + m.str());
  return it->second;
}

UnitKind CallGraph::unit_kind(const MethodId& m) const { return kinds_[at(m)]; }

const std::vector<MethodId>& CallGraph::callees(const MethodId& m) const { return out_[at(m)]; }

const std::vector<MethodId>& CallGraph::callers(const MethodId& m) const { return in_[at(m)]; }

std::string CallGraph::dump() const {
  std::ostringstream os;
  for (const auto& [a, b] : edges_) os << a.str() << " -> " << b.str() << '\n';
  return os.str();
}

CallGraph build_call_graph(const AppModel& model) {
  CallGraph cg;
  for (const auto& u : model.units)
    for (const auto& m : u.methods) {
      MethodId id{u.name, m.name};
      if (cg.index_.count(id)) continue;
      cg.index_.emplace(id, cg.nodes_.size());
      cg.nodes_.push_back(std::move(id));
      cg.kinds_.push_back(u.kind);
    }
  cg.out_.resize(cg.nodes_.size());
  cg.in_.resize(cg.nodes_.size());

  for (const auto& u : model.units)
    for (const auto& m : u.methods) {
      MethodId caller{u.name, m.name};
      auto& out = cg.out_[cg.index_.at(caller)];
      for (std::size_t i = 0; i < m.body.size(); ++i) {
        const auto* call = std::get_if<stmt::Call>(&m.body[i]);
        if (!call) continue;
        MethodId callee{call->unit, call->method};
        if (!cg.index_.count(callee))
          throw AnalysisError("call to undeclared method " + callee.str() + " at " + caller.str() +
                              " statement " + std::to_string(i));
        if (std::find(out.begin(), out.end(), callee) == out.end()) {
          out.push_back(callee);
          cg.edges_.emplace_back(caller, callee);
        }
      }
    }
  std::sort(cg.edges_.begin(), cg.edges_.end());
  // Callers are filled in node order so backward walks are deterministic.
  for (const auto& caller : cg.nodes_)
    for (const auto& callee : cg.out_[cg.index_.at(caller)]) cg.in_[cg.index_.at(callee)].push_back(caller);
  return cg;
}

std::vector<MethodId> backward_closure(const CallGraph& cg, const MethodId& method) {
  if (!cg.contains(method)) throw AnalysisError("unknown method " + method.str());
  std::vector<MethodId> order{method};
  std::set<MethodId> visited{method};
  std::deque<MethodId> queue{method};
  while (!queue.empty()) {
    MethodId cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& caller : cg.callers(cur)) {
      if (!visited.insert(caller).second) continue;
      order.push_back(caller);
      queue.push_back(caller);
    }
  }
  return order;
}

std::set<std::string> callers_of(const CallGraph& cg, const MethodId& method) {
  std::set<std::string> acts;
  for (const auto& m : backward_closure(cg, method))
    if (cg.unit_kind(m) == UnitKind::Activity) acts.insert(m.unit);
  return acts;
}

std::vector<MethodId> callees_of(const CallGraph& cg, const MethodId& method) {
  return cg.callees(method);
}

}  // namespace storyboard
