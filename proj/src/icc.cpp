// SPDX-License-Identifier: Apache-2.0

#include "storyboard/icc.hpp"

#include <algorithm>
#include <sstream>

#include "storyboard/static_atg.hpp"

namespace storyboard {

std::string to_string(const PrimitiveAttr& p) {
  switch (p.kind) {
    case PrimitiveAttr::Kind::Action: return "action=" + p.value;
    case PrimitiveAttr::Kind::Data: return "data=" + p.value;
    case PrimitiveAttr::Kind::Type: return "type=" + p.value;
    case PrimitiveAttr::Kind::Category: {
      std::string out = "category={";
      bool first = true;
      for (const auto& c : p.categories) {
        if (!first) out += ',';
        out += c;
        first = false;
      }
      return out + "}";
    }
  }
  return "?";
}

bool ParamSet::add(PrimitiveAttr p) {
  if (std::find(primitives.begin(), primitives.end(), p) != primitives.end()) return false;
  primitives.push_back(std::move(p));
  return true;
}

bool ParamSet::add(ExtraParam e) {
  if (std::find(extras.begin(), extras.end(), e) != extras.end()) return false;
  extras.push_back(std::move(e));
  return true;
}

const ParamSet& IccTable::of(const std::string& activity) const {
  static const ParamSet kEmpty{};
  auto it = entries.find(activity);
  return it == entries.end() ? kEmpty : it->second;
}

std::string IccTable::dump() const {
  std::ostringstream os;
  for (const auto& [act, ps] : entries) {
    os << act << ": [";
    for (std::size_t i = 0; i < ps.primitives.size(); ++i) os << (i ? ", " : "") << to_string(ps.primitives[i]);
    os << "] / [";
    for (std::size_t i = 0; i < ps.extras.size(); ++i)
      os << (i ? ", " : "") << ps.extras[i].key << ':' << to_string(ps.extras[i].type);
    os << "]\n";
  }
  return os.str();
}

namespace {

void collect(const AppModel& model, const CallGraph& cg, const MethodId& method, ParamSet& acc,
             std::set<MethodId>& visited, int depth, const IccOptions& options) {
  if (depth > options.depth_cap || !visited.insert(method).second) return;
  const MethodDef* m = model.find_method(method.unit, method.method);
  if (!m) return;
  for (const auto& s : m->body)
    if (const auto* ge = std::get_if<stmt::GetExtra>(&s)) acc.add(ExtraParam{ge->key, ge->type});
  for (const auto& callee : callees_of(cg, method)) collect(model, cg, callee, acc, visited, depth + 1, options);
}

void add_filter(ParamSet& ps, const IntentFilter& f) {
  using K = PrimitiveAttr::Kind;
  if (f.action) ps.add(PrimitiveAttr{K::Action, *f.action, {}});
  if (!f.categories.empty()) ps.add(PrimitiveAttr{K::Category, {}, f.categories});
  if (f.data) ps.add(PrimitiveAttr{K::Data, *f.data, {}});
  if (f.mime_type) ps.add(PrimitiveAttr{K::Type, *f.mime_type, {}});
}

bool belongs_to(const AppModel& model, const UnitDef& unit, const std::string& activity) {
  const UnitDef* cur = &unit;
  for (int hops = 0; cur && hops <= static_cast<int>(model.units.size()); ++hops) {
    if (cur->name == activity) return true;
    if (cur->kind != UnitKind::Inner) return false;
    cur = model.find_unit(cur->outer);
  }
  return false;
}

// Attributes an activity sets on implicit intents that resolve back to itself.
void add_code_primitives(const AppModel& model, const std::string& activity, ParamSet& ps) {
  for (const auto& unit : model.units) {
    if (!belongs_to(model, unit, activity)) continue;
    for (const auto& m : unit.methods)
      for (std::size_t i = 0; i < m.body.size(); ++i) {
        const auto* st = std::get_if<stmt::StartActivity>(&m.body[i]);
        if (!st) continue;
        const stmt::NewIntent* binding = nullptr;
        for (std::size_t j = 0; j < i; ++j)
          if (const auto* ni = std::get_if<stmt::NewIntent>(&m.body[j]); ni && ni->var == st->var) binding = ni;
        if (!binding || binding->explicit_target) continue;
        if (resolve_target(StartSite{&unit, &m, i}, model) == activity) add_filter(ps, binding->implicit_spec);
      }
  }
}

}  // namespace

ParamSet get_extras(const AppModel& model, const CallGraph& cg, const MethodId& method, ParamSet acc,
                    const IccOptions& options) {
  if (!cg.contains(method)) throw AnalysisError("unknown method " + method.str());
  std::set<MethodId> visited;
  collect(model, cg, method, acc, visited, 0, options);
  return acc;
}

IccTable extract_icc(const AppModel& model, const CallGraph& cg, const IccOptions& options) {
  static const char* kLifecycle[] = {"onCreate", "onStart", "onResume"};
  IccTable table;
  for (const auto& decl : model.manifest.declared_activities) {
    ParamSet ps;
    for (const auto& f : decl.intent_filters) add_filter(ps, f);
    add_code_primitives(model, decl.name, ps);

    const UnitDef* unit = model.find_unit(decl.name);
    if (unit) {
      std::set<MethodId> visited;
      for (const char* name : kLifecycle) {
        if (!options.include_on_resume && std::string_view(name) == "onResume") continue;
        if (unit->find_method(name)) collect(model, cg, MethodId{unit->name, name}, ps, visited, 0, options);
      }
    }
    table.entries.emplace(decl.name, std::move(ps));
  }
  return table;
}

}  // namespace storyboard
