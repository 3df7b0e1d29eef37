// SPDX-License-Identifier: Apache-2.0

#include "storyboard/static_atg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace storyboard {

std::string to_string(Origin o) { return o == Origin::Static ? "static" : "dynamic"; }

std::string to_string(const Via& v) {
  switch (v.kind) {
    case Via::Kind::Direct: return "direct";
    case Via::Kind::InnerClass: return "inner_class";
    case Via::Kind::Fragment: return "fragment";
    case Via::Kind::Component: return "component:" + v.component;
  }
  return "?";
}

bool Atg::add(TransitionPair p) {
  Edge key{p.source, p.target};
  return pairs_.emplace(std::move(key), std::move(p)).second;
}

bool Atg::contains(const std::string& source, const std::string& target) const {
  return pairs_.count(Edge{source, target}) != 0;
}

std::vector<TransitionPair> Atg::pairs() const {
  std::vector<TransitionPair> out;
  out.reserve(pairs_.size());
  for (const auto& [k, p] : pairs_) out.push_back(p);
  return out;
}

std::set<Edge> Atg::edges() const {
  std::set<Edge> out;
  for (const auto& [k, p] : pairs_) out.insert(k);
  return out;
}

std::string Atg::dump() const {
  std::ostringstream os;
  for (const auto& [k, p] : pairs_)
    os << p.source << " -> " << p.target << " [" << to_string(p.origin) << ',' << to_string(p.via) << "]\n";
  return os.str();
}

Atg parse_atg_dump(std::string_view text) {
  Atg atg;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    auto arrow = line.find(" -> ");
    auto open = line.rfind(" [");
    auto comma = line.find(',', open == std::string::npos ? 0 : open);
    if (arrow == std::string::npos || open == std::string::npos || open < arrow || comma == std::string::npos ||
        line.back() != ']')
      throw std::runtime_error("bad ATG line " + std::to_string(number) + ": " + line);
    TransitionPair p;
    p.source = line.substr(0, arrow);
    p.target = line.substr(arrow + 4, open - arrow - 4);
    std::string origin = line.substr(open + 2, comma - open - 2);
    std::string via = line.substr(comma + 1, line.size() - comma - 2);
    if (origin == "static")
      p.origin = Origin::Static;
    else if (origin == "dynamic")
      p.origin = Origin::Dynamic;
    else
      throw std::runtime_error("bad origin on ATG line " + std::to_string(number));
    if (via == "direct")
      p.via = Via::direct();
    else if (via == "inner_class")
      p.via = Via::inner_class();
    else if (via == "fragment")
      p.via = Via::fragment();
    else if (via.rfind("component:", 0) == 0)
      p.via = Via::tap(via.substr(10));
    else
      throw std::runtime_error("bad via on ATG line " + std::to_string(number));
    atg.add(std::move(p));
  }
  return atg;
}

bool filter_matches(const IntentFilter& intent, const IntentFilter& filter) {
  if (intent.action && filter.action != intent.action) return false;
  if (!std::includes(filter.categories.begin(), filter.categories.end(), intent.categories.begin(),
                     intent.categories.end()))
    return false;
  if (intent.data && filter.data != intent.data) return false;
  if (intent.mime_type && filter.mime_type != intent.mime_type) return false;
  return true;
}

std::optional<std::string> resolve_target(const StartSite& site, const AppModel& model) {
  const auto* start = std::get_if<stmt::StartActivity>(&site.method->body.at(site.index));
  if (!start) return std::nullopt;
  const stmt::NewIntent* binding = nullptr;
  for (std::size_t i = 0; i < site.index; ++i)
    if (const auto* ni = std::get_if<stmt::NewIntent>(&site.method->body[i]); ni && ni->var == start->var)
      binding = ni;
  if (!binding) return std::nullopt;
  if (binding->explicit_target) return binding->explicit_target;
  for (const auto& act : model.manifest.declared_activities)
    for (const auto& f : act.intent_filters)
      if (filter_matches(binding->implicit_spec, f)) return act.name;
  return std::nullopt;
}

namespace {

// Who a piece of code acts on behalf of.
struct Owner {
  enum class Kind { Activity, Service, Fragment };
  Kind kind;
  std::string name;
  bool through_inner = false;
  auto operator<=>(const Owner&) const = default;
};

class Extractor {
 public:
  Extractor(const AppModel& model, const CallGraph& cg) : model_(model), cg_(cg) {}

  Atg run() {
    for (const auto& unit : model_.units)
      for (const auto& method : unit.methods) visit(unit, method);
    merge_fragments();
    return std::move(atg_);
  }

 private:
  std::string site_name(const UnitDef& u, const MethodDef& m, std::size_t i) const {
    return u.name + "." + m.name + "#" + std::to_string(i);
  }

  // Inner units stand for their enclosing class.
  std::optional<Owner> unit_owner(const UnitDef& unit) const {
    const UnitDef* cur = &unit;
    bool inner = false;
    std::set<std::string> seen;
    while (cur && cur->kind == UnitKind::Inner) {
      if (!seen.insert(cur->name).second) return std::nullopt;
      inner = true;
      cur = model_.find_unit(cur->outer);
    }
    if (!cur) return std::nullopt;
    switch (cur->kind) {
      case UnitKind::Activity: return Owner{Owner::Kind::Activity, cur->name, inner};
      case UnitKind::Service: return Owner{Owner::Kind::Service, cur->name, inner};
      case UnitKind::Fragment: return Owner{Owner::Kind::Fragment, cur->name, inner};
      default: return std::nullopt;
    }
  }

  // Components on whose behalf `method` of `unit` runs.
  std::set<Owner> owners(const UnitDef& unit, const MethodDef& method) const {
    if (unit.kind == UnitKind::Inner || unit.kind == UnitKind::Fragment) {
      if (auto o = unit_owner(unit)) return {*o};
      return {};
    }
    // Backward traversal of the call graph to every enclosing component.
    std::set<Owner> out;
    for (const auto& caller : backward_closure(cg_, MethodId{unit.name, method.name})) {
      const UnitDef* u = model_.find_unit(caller.unit);
      if (!u) continue;
      if (auto o = unit_owner(*u)) out.insert(*o);
    }
    return out;
  }

  void visit(const UnitDef& unit, const MethodDef& method) {
    std::optional<std::set<Owner>> cached;
    auto get_owners = [&]() -> const std::set<Owner>& {
      if (!cached) cached = owners(unit, method);
      return *cached;
    };

    std::vector<std::string> txn;
    for (std::size_t i = 0; i < method.body.size(); ++i) {
      const Stmt& s = method.body[i];
      if (std::holds_alternative<stmt::StartActivity>(s)) {
        add_transition(unit, method, i, get_owners());
      } else if (const auto* fa = std::get_if<stmt::FragmentAdd>(&s)) {
        txn.push_back(fa->fragment);
      } else if (const auto* fr = std::get_if<stmt::FragmentReplace>(&s)) {
        txn.push_back(fr->fragment);
      } else if (std::holds_alternative<stmt::FragmentCommit>(s)) {
        for (const auto& f : txn) bind(get_owners(), f);
        txn.clear();
      } else if (const auto* sa = std::get_if<stmt::SetAdapter>(&s)) {
        bind(get_owners(), sa->fragment);
      }
    }
  }

  void add_transition(const UnitDef& unit, const MethodDef& method, std::size_t i,
                      const std::set<Owner>& hosts) {
    auto target = resolve_target(StartSite{&unit, &method, i}, model_);
    if (!target) {
      atg_.note("skipped site " + site_name(unit, method, i) + ": no activity matches the implicit intent");
      return;
    }
    const UnitDef* tu = model_.find_unit(*target);
    if (!tu || tu->kind != UnitKind::Activity || !model_.manifest.declares(*target)) {
      atg_.note("skipped site " + site_name(unit, method, i) + ": unresolved target '" + *target + "'");
      return;
    }
    for (const auto& o : hosts) {
      if (o.kind == Owner::Kind::Fragment) {
        atg_.add_pending(Edge{o.name, *target});
        continue;
      }
      atg_.add(TransitionPair{o.name, *target, Origin::Static,
                              o.through_inner ? Via::inner_class() : Via::direct()});
    }
  }

  void bind(const std::set<Owner>& hosts, const std::string& fragment) {
    for (const auto& o : hosts)
      if (o.kind != Owner::Kind::Service) {
        atg_.add_pending(Edge{o.name, fragment});
        bindings_[fragment].insert(o.name);
      }
  }

  // Activities hosting `fragment`, directly or through parent fragments.
  std::set<std::string> hosts_of(const std::string& fragment) const {
    std::set<std::string> acts;
    std::set<std::string> seen{fragment};
    std::vector<std::string> stack{fragment};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      auto it = bindings_.find(cur);
      if (it == bindings_.end()) continue;
      for (const auto& host : it->second) {
        const UnitDef* hu = model_.find_unit(host);
        if (hu && hu->kind == UnitKind::Fragment) {
          if (seen.insert(host).second) stack.push_back(host);
        } else {
          acts.insert(host);
        }
      }
    }
    return acts;
  }

  void merge_fragments() {
    std::size_t dropped = 0;
    for (const auto& [from, to] : atg_.pending_fragment_edges()) {
      const UnitDef* fu = model_.find_unit(from);
      if (!fu || fu->kind != UnitKind::Fragment) continue;  // binding record
      const UnitDef* tu = model_.find_unit(to);
      if (tu && tu->kind == UnitKind::Fragment) continue;  // nested binding
      auto acts = hosts_of(from);
      if (acts.empty()) ++dropped;
      for (const auto& act : acts) atg_.add(TransitionPair{act, to, Origin::Static, Via::fragment()});
    }
    atg_.clear_pending();
    if (dropped)
      atg_.note("dropped " + std::to_string(dropped) + " fragment edge(s) with no hosting activity");
  }

  const AppModel& model_;
  const CallGraph& cg_;
  Atg atg_;
  std::map<std::string, std::set<std::string>> bindings_;
};

}  // namespace

Atg extract_static_atg(const AppModel& model, const CallGraph& cg) { return Extractor(model, cg).run(); }

}  // namespace storyboard
