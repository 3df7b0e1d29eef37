// SPDX-License-Identifier: Apache-2.0

#include "storyboard/validate.hpp"

#include <map>
#include <set>

namespace storyboard {

std::string to_string(const Diagnostic& d) {
  const char* cat = d.category == Diagnostic::Category::Reference   ? "reference"
                    : d.category == Diagnostic::Category::Duplicate ? "duplicate"
                                                                    : "invariant";
  return std::string(cat) + " " + d.path + ": " + d.message;
}

bool is_reserved_label(std::string_view label) {
  return label.find("has stopped") != std::string_view::npos ||
         label.find("keeps stopping") != std::string_view::npos || label == "ALLOW" ||
         label == "DENY";
}

namespace {

using Cat = Diagnostic::Category;

class Validator {
 public:
  explicit Validator(const AppModel& m) : m_(m) {}

  std::vector<Diagnostic> run() {
    check_manifest();
    check_units();
    for (const auto& [id, layout] : m_.layouts) {
      std::set<std::string> ids;
      check_node(layout.root, nullptr, "layout/" + id, ids);
    }
    check_runtime();
    return std::move(out_);
  }

 private:
  void add(Cat c, std::string path, std::string msg) {
    out_.push_back(Diagnostic{c, std::move(path), std::move(msg)});
  }

  void check_manifest() {
    std::set<std::string> names;
    int launchers = 0;
    for (const auto& a : m_.manifest.declared_activities) {
      const std::string path = "manifest/activity/" + a.name;
      if (!names.insert(a.name).second) add(Cat::Duplicate, path, "activity declared twice");
      if (a.is_launcher) ++launchers;
      for (std::size_t i = 0; i < a.intent_filters.size(); ++i)
        if (a.intent_filters[i].empty())
          add(Cat::Invariant, path + "/filter/" + std::to_string(i), "intent filter has no fields");
    }
    if (launchers != 1)
      add(Cat::Invariant, "manifest",
          "expected exactly one launcher activity, found " + std::to_string(launchers));
    std::set<std::string> services;
    for (const auto& s : m_.manifest.declared_services)
      if (!services.insert(s).second) add(Cat::Duplicate, "manifest/service/" + s, "service declared twice");
  }

  void check_units() {
    std::map<std::string, int> counts;
    for (const auto& u : m_.units)
      if (++counts[u.name] == 2) add(Cat::Duplicate, "unit/" + u.name, "unit defined twice");

    for (const auto& a : m_.manifest.declared_activities) {
      const UnitDef* u = m_.find_unit(a.name);
      if (!u)
        add(Cat::Reference, "manifest/activity/" + a.name, "no unit defines activity '" + a.name + "'");
      else if (u->kind != UnitKind::Activity)
        add(Cat::Invariant, "unit/" + a.name, "declared activity is a " + to_string(u->kind) + " unit");
    }
    for (const auto& s : m_.manifest.declared_services) {
      const UnitDef* u = m_.find_unit(s);
      if (!u || u->kind != UnitKind::Service)
        add(Cat::Reference, "manifest/service/" + s, "no service unit named '" + s + "'");
    }

    for (const auto& u : m_.units) {
      const std::string path = "unit/" + u.name;
      if (u.kind == UnitKind::Activity && !m_.manifest.declares(u.name))
        add(Cat::Invariant, path, "activity unit is not declared in the manifest");
      if (u.kind == UnitKind::Service) {
        bool declared = false;
        for (const auto& s : m_.manifest.declared_services) declared |= s == u.name;
        if (!declared) add(Cat::Invariant, path, "service unit is not declared in the manifest");
      }
      if (u.kind == UnitKind::Inner) check_outer_chain(u, path);
      if ((u.kind == UnitKind::Activity || u.kind == UnitKind::Fragment) && !u.layout_ref)
        add(Cat::Invariant, path, to_string(u.kind) + " unit needs a layout");
      if (u.layout_ref && !m_.layouts.count(*u.layout_ref))
        add(Cat::Reference, path + "/layout", "undeclared layout '" + *u.layout_ref + "'");

      std::set<std::string> methods;
      for (const auto& m : u.methods) {
        const std::string mpath = path + "/method/" + m.name;
        if (!methods.insert(m.name).second) add(Cat::Duplicate, mpath, "method defined twice");
        check_body(m, mpath);
      }
    }
  }

  void check_outer_chain(const UnitDef& u, const std::string& path) {
    std::set<std::string> seen{u.name};
    const UnitDef* cur = &u;
    while (cur->kind == UnitKind::Inner) {
      const UnitDef* outer = m_.find_unit(cur->outer);
      if (!outer) {
        add(Cat::Reference, path + "/outer", "outer unit '" + cur->outer + "' does not exist");
        return;
      }
      if (!seen.insert(outer->name).second) {
        add(Cat::Invariant, path + "/outer", "inner-class nesting forms a cycle");
        return;
      }
      cur = outer;
    }
  }

  void check_fragment_ref(const std::string& name, const std::string& path) {
    const UnitDef* f = m_.find_unit(name);
    if (!f)
      add(Cat::Reference, path, "unknown fragment '" + name + "'");
    else if (f->kind != UnitKind::Fragment)
      add(Cat::Invariant, path, "'" + name + "' is not a fragment unit");
  }

  void check_body(const MethodDef& m, const std::string& mpath) {
    std::set<std::string> bound;
    bool pending_txn = false;
    for (std::size_t i = 0; i < m.body.size(); ++i) {
      const std::string spath = mpath + "/stmt/" + std::to_string(i);
      const Stmt& s = m.body[i];
      if (auto* ni = std::get_if<stmt::NewIntent>(&s)) {
        bound.insert(ni->var);
        if (!ni->explicit_target && ni->implicit_spec.empty())
          add(Cat::Invariant, spath, "implicit intent without attributes");
      } else if (auto* pe = std::get_if<stmt::PutExtra>(&s)) {
        if (!bound.count(pe->var)) add(Cat::Invariant, spath, "intent '" + pe->var + "' is not bound");
        if (pe->key.empty()) add(Cat::Invariant, spath, "empty extra key");
      } else if (auto* pb = std::get_if<stmt::PutBundle>(&s)) {
        if (!bound.count(pb->var)) add(Cat::Invariant, spath, "intent '" + pb->var + "' is not bound");
      } else if (auto* st = std::get_if<stmt::StartActivity>(&s)) {
        if (!bound.count(st->var))
          add(Cat::Invariant, spath, "intent '" + st->var + "' is started before 'new'");
      } else if (auto* ge = std::get_if<stmt::GetExtra>(&s)) {
        if (ge->key.empty()) add(Cat::Invariant, spath, "empty extra key");
      } else if (auto* fa = std::get_if<stmt::FragmentAdd>(&s)) {
        check_fragment_ref(fa->fragment, spath);
        pending_txn = true;
      } else if (auto* fr = std::get_if<stmt::FragmentReplace>(&s)) {
        check_fragment_ref(fr->fragment, spath);
        pending_txn = true;
      } else if (std::holds_alternative<stmt::FragmentCommit>(s)) {
        if (!pending_txn) add(Cat::Invariant, spath, "commit without a preceding add/replace");
        pending_txn = false;
      } else if (auto* sa = std::get_if<stmt::SetAdapter>(&s)) {
        check_fragment_ref(sa->fragment, spath);
      } else if (auto* c = std::get_if<stmt::Call>(&s)) {
        if (!m_.find_method(c->unit, c->method))
          add(Cat::Reference, spath, "call to undeclared method " + c->unit + "." + c->method);
      }
    }
  }

  void check_node(const Node& n, const Node* parent, const std::string& lpath, std::set<std::string>& ids) {
    const std::string path = lpath + "/node/" + n.id;
    if (!ids.insert(n.id).second) add(Cat::Duplicate, path, "node id used twice");
    const Rect grid{0, 0, kGridWidth, kGridHeight};
    if (n.bounds.w <= 0 || n.bounds.h <= 0) add(Cat::Invariant, path, "empty bounds");
    if (!grid.contains(n.bounds)) add(Cat::Invariant, path, "bounds leave the 90x160 grid");
    if (parent && !parent->bounds.contains(n.bounds))
      add(Cat::Invariant, path, "bounds exceed parent '" + parent->id + "'");
    if (n.color < 0 || n.color >= kPaletteSize) add(Cat::Invariant, path, "color outside palette");
    if (n.on_click) {
      if (!n.clickable) add(Cat::Invariant, path, "click action on a non-clickable node");
      if (!m_.manifest.declares(n.on_click->target))
        add(Cat::Reference, path + "/launch", "launch target '" + n.on_click->target + "' is not a declared activity");
    }
    if (is_reserved_label(n.label)) add(Cat::Invariant, path, "label collides with a device dialog keyword");
    for (const auto& c : n.children) check_node(c, &n, lpath, ids);
  }

  void check_runtime() {
    const RuntimeSpec& rt = m_.runtime;
    for (const auto& [name, a] : rt.activities) {
      const std::string path = "runtime/" + name;
      if (!m_.manifest.declares(name)) add(Cat::Reference, path, "runtime entry for undeclared activity");
      std::set<std::string> keys;
      for (const auto& e : a.required_extras) {
        if (e.key.empty()) add(Cat::Invariant, path, "empty extra key");
        if (!keys.insert(e.key).second) add(Cat::Duplicate, path + "/requires/" + e.key, "required extra listed twice");
      }
      if (a.requires_login && !rt.login_activity)
        add(Cat::Invariant, path, "login-gated activity but no login-activity is set");
    }
    if (rt.login_activity) {
      if (!m_.manifest.declares(*rt.login_activity))
        add(Cat::Reference, "runtime/login-activity", "undeclared login activity '" + *rt.login_activity + "'");
      else if (rt.of(*rt.login_activity).requires_login)
        add(Cat::Invariant, "runtime/login-activity", "the login activity cannot itself require login");
    }
  }

  const AppModel& m_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const AppModel& model) { return Validator(model).run(); }

}  // namespace storyboard
