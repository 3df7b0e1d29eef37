// SPDX-License-Identifier: Apache-2.0

#include "storyboard/device.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

#include "storyboard/instrument.hpp"
#include "storyboard/validate.hpp"

namespace storyboard {

namespace {

constexpr std::string_view kAllowId = "permission_allow_button";
constexpr std::string_view kDenyId = "permission_deny_button";
constexpr std::string_view kCloseId = "crash_close_button";
constexpr int kMaxCallDepth = 32;

std::string value_text(const ExtraValue& v) {
  if (const auto* b = std::get_if<BasicValue>(&v)) return format_value(*b);
  std::string out = "{";
  const auto& entries = std::get<std::vector<BundleValueEntry>>(v);
  for (std::size_t i = 0; i < entries.size(); ++i)
    out += (i ? "," : "") + entries[i].key + "=" + format_value(entries[i].value);
  return out + "}";
}

bool literal_satisfies(const ExtraLiteral& lit, const ExtraDecl& decl) {
  if (lit.key != decl.key || lit.type.is_bundle != decl.type.is_bundle) return false;
  if (!decl.type.is_bundle) {
    const auto* v = std::get_if<BasicValue>(&lit.value);
    return v && type_of(*v) == decl.type.basic;
  }
  const auto* entries = std::get_if<std::vector<BundleValueEntry>>(&lit.value);
  if (!entries) return false;
  for (const auto& want : decl.type.entries) {
    auto it = std::find_if(entries->begin(), entries->end(),
                           [&](const BundleValueEntry& e) { return e.key == want.key; });
    if (it == entries->end() || type_of(it->value) != want.type) return false;
  }
  return true;
}

bool has_extra(const std::vector<ExtraLiteral>& extras, const ExtraDecl& decl) {
  return std::any_of(extras.begin(), extras.end(),
                     [&](const ExtraLiteral& l) { return literal_satisfies(l, decl); });
}

std::string bind_label(const std::string& label, const std::vector<ExtraLiteral>& extras) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = label.find("${", pos);
    if (open == std::string::npos) break;
    auto close = label.find('}', open + 2);
    if (close == std::string::npos) break;
    out.append(label, pos, open - pos);
    std::string key = label.substr(open + 2, close - open - 2);
    auto it = std::find_if(extras.begin(), extras.end(), [&](const ExtraLiteral& l) { return l.key == key; });
    out += it == extras.end() ? "null" : value_text(it->value);
    pos = close + 1;
  }
  out.append(label, pos, std::string::npos);
  return out;
}

void bind_labels(Node& n, const std::vector<ExtraLiteral>& extras) {
  n.label = bind_label(n.label, extras);
  for (auto& c : n.children) bind_labels(c, extras);
}

std::string placeholder_text(ExternalData e) {
  switch (e) {
    case ExternalData::RemoteServer: return "Unable to reach server";
    case ExternalData::LocalDb: return "No items yet";
    case ExternalData::WebAuth: return "Sign in with your web account";
    case ExternalData::Hardware: return "Feature not available on this device";
    case ExternalData::SlowLoad: return "Loading...";
  }
  return {};
}

// Pages backed by data the device cannot supply render with a placeholder.
void inject_placeholder(Node& root, ExternalData e, std::uint64_t seed, const std::string& activity) {
  const Rect& r = root.bounds;
  Node p;
  p.type = ComponentType::TextView;
  p.label = placeholder_text(e);
  if (e == ExternalData::SlowLoad) {
    // Content below the cut has not arrived yet.
    p.id = "__loading";
    p.type = ComponentType::Container;
    const int span = std::max(1, r.h / 2);
    const int cut = r.y + r.h / 4 + static_cast<int>(mix64(seed ^ fnv1a(activity)) % static_cast<std::uint64_t>(span));
    p.bounds = Rect{r.x, cut, r.w, r.y + r.h - cut};
    p.color = 0;
  } else {
    p.id = "__placeholder";
    const int h = std::min(6, r.h);
    p.bounds = Rect{r.x, r.y + (r.h - h) / 2, r.w, h};
    p.color = 7;
  }
  root.children.push_back(std::move(p));
}

Node dialog_root(const std::string& id) {
  Node root;
  root.id = id;
  root.type = ComponentType::Container;
  root.bounds = Rect{0, 0, kGridWidth, kGridHeight};
  root.color = 13;
  return root;
}

Node dialog_node(std::string id, ComponentType type, Rect bounds, std::string label, int color) {
  Node n;
  n.id = std::move(id);
  n.type = type;
  n.bounds = bounds;
  n.label = std::move(label);
  n.color = color;
  n.clickable = type == ComponentType::Button;
  return n;
}

LayoutTree crash_dialog(const std::string& package) {
  Node root = dialog_root("crash_dialog");
  Node panel = dialog_node("crash_panel", ComponentType::Container, Rect{5, 55, 80, 40}, "", 0);
  panel.children.push_back(
      dialog_node("crash_message", ComponentType::TextView, Rect{7, 60, 76, 16}, package + " has stopped", 0));
  panel.children.push_back(
      dialog_node(std::string(kCloseId), ComponentType::Button, Rect{50, 80, 33, 10}, "Close app", 2));
  root.children.push_back(std::move(panel));
  return LayoutTree{std::move(root)};
}

LayoutTree permission_dialog(const std::string& package, const std::string& permission) {
  Node root = dialog_root("permission_dialog");
  Node panel = dialog_node("permission_panel", ComponentType::Container, Rect{5, 55, 80, 40}, "", 0);
  panel.children.push_back(dialog_node("permission_message", ComponentType::TextView, Rect{7, 60, 76, 16},
                                       "Allow " + package + " to use " + permission + "?", 0));
  panel.children.push_back(dialog_node(std::string(kDenyId), ComponentType::Button, Rect{10, 80, 30, 10}, "DENY", 2));
  panel.children.push_back(dialog_node(std::string(kAllowId), ComponentType::Button, Rect{50, 80, 30, 10}, "ALLOW", 2));
  root.children.push_back(std::move(panel));
  return LayoutTree{std::move(root)};
}

bool any_label(const Node& n, const auto& pred) {
  if (pred(n.label)) return true;
  return std::any_of(n.children.begin(), n.children.end(), [&](const Node& c) { return any_label(c, pred); });
}

void collect_components(const Node& n, std::vector<Component>& out) {
  if (n.children.empty() || n.clickable) out.push_back(Component{n.id, n.type, n.clickable, n.bounds, n.label});
  for (const auto& c : n.children) collect_components(c, out);
}

const UnitDef* chain_root(const AppModel& model, const UnitDef& unit) {
  const UnitDef* cur = &unit;
  for (std::size_t hops = 0; cur && cur->kind == UnitKind::Inner; ++hops) {
    if (hops > model.units.size()) return nullptr;
    cur = model.find_unit(cur->outer);
  }
  return cur;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_am_command(const std::string& package, const LaunchCommand& cmd) {
  std::string out = "am start -n " + package + "/" + package + "." + cmd.target;
  for (const auto& e : cmd.extras) {
    std::string flag = "--ebundle";
    if (!e.type.is_bundle) switch (e.type.basic) {
        case BasicType::String: flag = "--es"; break;
        case BasicType::Integer: flag = "--ei"; break;
        case BasicType::Boolean: flag = "--ez"; break;
        case BasicType::Float: flag = "--ef"; break;
      }
    std::string v = value_text(e.value);
    if (v.find(' ') != std::string::npos || v.empty()) v = "'" + v + "'";
    out += " " + flag + " " + e.key + " " + v;
  }
  return out;
}

std::vector<Component> list_components(const LayoutTree& layout) {
  std::vector<Component> out;
  collect_components(layout.root, out);
  return out;
}

std::string to_string(LaunchStatus s) {
  switch (s) {
    case LaunchStatus::Rendered: return "Rendered";
    case LaunchStatus::Crashed: return "Crashed";
    case LaunchStatus::PermissionPrompt: return "PermissionPrompt";
    case LaunchStatus::Redirected: return "Redirected";
    case LaunchStatus::Dismissed: return "Dismissed";
  }
  return "?";
}

std::string LaunchOutcome::describe() const {
  std::string out = to_string(status);
  if (status == LaunchStatus::Crashed) return out + "(" + cause + ")";
  if (actual_activity) out += "(" + *actual_activity + ")";
  return out;
}

bool dump_shows_crash(const LayoutTree& dump) {
  return any_label(dump.root, [](const std::string& l) {
    return l.find("has stopped") != std::string::npos || l.find("keeps stopping") != std::string::npos;
  });
}

bool dump_shows_permission_prompt(const LayoutTree& dump) {
  return any_label(dump.root, [](const std::string& l) { return l == "ALLOW"; }) &&
         any_label(dump.root, [](const std::string& l) { return l == "DENY"; });
}

// ---------------------------------------------------------------------------

DummyValues::DummyValues(const AppModel& model, std::uint64_t seed) : seed_(seed) {
  auto push = [&](BasicType t, BasicValue v) {
    auto& pool = pools_[t];
    if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(std::move(v));
  };
  auto scan = [&](const Node& n, auto&& self) -> void {
    const std::string& l = n.label;
    if (!l.empty() && l.find("${") == std::string::npos) {
      std::int64_t i = 0;
      double d = 0;
      auto [pi, ei] = std::from_chars(l.data(), l.data() + l.size(), i);
      if (ei == std::errc() && pi == l.data() + l.size()) {
        push(BasicType::Integer, i);
      } else if (l == "true" || l == "false") {
        push(BasicType::Boolean, l == "true");
      } else if (auto [pd, ed] = std::from_chars(l.data(), l.data() + l.size(), d);
                 ed == std::errc() && pd == l.data() + l.size()) {
        push(BasicType::Float, d);
      } else {
        push(BasicType::String, l);
      }
    }
    for (const auto& c : n.children) self(c, self);
  };
  for (const auto& [id, layout] : model.layouts) scan(layout.root, scan);
}

BasicValue DummyValues::value_for(BasicType type, const std::string& activity, const std::string& key) const {
  auto it = pools_.find(type);
  if (it != pools_.end() && !it->second.empty()) {
    const std::uint64_t pick = mix64(seed_ ^ fnv1a(activity + "/" + key));
    return it->second[pick % it->second.size()];
  }
  switch (type) {
    case BasicType::String: return std::string("Alice");
    case BasicType::Integer: return std::int64_t{2};
    case BasicType::Boolean: return true;
    case BasicType::Float: return 1.0;
  }
  return std::string("Alice");
}

ExtraLiteral DummyValues::literal_for(const std::string& activity, const std::string& key,
                                      const ExtraType& type) const {
  if (!type.is_bundle) return ExtraLiteral{key, type, value_for(type.basic, activity, key)};
  std::vector<BundleValueEntry> entries;
  for (const auto& e : type.entries)
    entries.push_back(BundleValueEntry{e.key, value_for(e.type, activity, key + "." + e.key)});
  return ExtraLiteral{key, type, std::move(entries)};
}

// ---------------------------------------------------------------------------

Device::Device(std::uint64_t seed, DeviceOptions options) : options_(options) { state_.rng_seed = seed; }

const AppModel& Device::app() const {
  if (!state_.installed) throw DeviceError("no app installed");
  return *state_.installed;
}

void Device::install(const AppModel& model) {
  auto diags = validate(model);
  if (!diags.empty()) throw DeviceError("cannot install invalid app: " + to_string(diags.front()));
  const std::uint64_t seed = state_.rng_seed;
  state_ = DeviceState{};
  state_.rng_seed = seed;
  state_.installed = model;
  dummies_.emplace(*state_.installed, seed);
  log("install", model.package_id + " revision=" + std::to_string(model.revision), "ok");
}

void Device::log(std::string op, std::string args, std::string outcome) {
  state_.event_log.push_back(
      SessionEvent{state_.event_log.size(), std::move(op), std::move(args), std::move(outcome)});
}

std::string Device::session_log() const {
  std::ostringstream os;
  for (const auto& e : state_.event_log) os << e.ts << ' ' << e.op << ' ' << e.args << " -> " << e.outcome << '\n';
  return os.str();
}

const StackEntry* Device::top_entry() const {
  return state_.back_stack.empty() ? nullptr : &state_.back_stack.back();
}

std::optional<std::string> Device::top_activity() const {
  if (state_.back_stack.empty()) return std::nullopt;
  return state_.back_stack.back().activity;
}

LayoutTree Device::dump_layout() const {
  if (state_.interstitial) return state_.interstitial->tree;
  if (state_.back_stack.empty()) throw DeviceError("dump_layout: back stack is empty");
  return state_.back_stack.back().page.layout_dump;
}

void Device::grant_permission(const std::string& permission) {
  state_.granted_permissions.insert(permission);
  log("grant", permission, "ok");
}

void Device::set_logged_in(bool logged_in) {
  state_.logged_in = logged_in;
  log("login", logged_in ? "on" : "off", "ok");
}

void Device::force_stop() {
  state_.back_stack.clear();
  state_.interstitial.reset();
  log("force-stop", state_.installed ? state_.installed->package_id : "-", "ok");
}

void Device::press_back() {
  if (state_.interstitial)
    state_.interstitial.reset();
  else if (!state_.back_stack.empty())
    state_.back_stack.pop_back();
  log("back", "-", top_activity().value_or("-"));
}

RenderedPage Device::render(const std::string& activity, const std::vector<ExtraLiteral>& extras) const {
  const AppModel& m = app();
  const LayoutTree* layout = m.layout_of(activity);
  if (!layout) throw DeviceError("activity " + activity + " has no layout");
  RenderedPage page;
  page.activity = activity;
  page.layout_dump = *layout;
  bind_labels(page.layout_dump.root, extras);
  if (auto ext = m.runtime.of(activity).external_data)
    inject_placeholder(page.layout_dump.root, *ext, state_.rng_seed, activity);
  page.raster = rasterize(page.layout_dump, state_.rng_seed);
  page.components = list_components(page.layout_dump);
  return page;
}

LaunchOutcome Device::settle(LaunchStatus status, std::string cause) {
  LaunchOutcome out;
  out.status = status;
  out.cause = std::move(cause);
  out.actual_activity = top_activity();
  if ((status == LaunchStatus::Rendered || status == LaunchStatus::Redirected) && !state_.back_stack.empty())
    out.page = state_.back_stack.back().page;
  return out;
}

LaunchOutcome Device::launch(const LaunchCommand& cmd) { return start(cmd, true); }

LaunchOutcome Device::start(const LaunchCommand& cmd, bool external) {
  const AppModel& m = app();
  const std::string args = to_am_command(m.package_id, cmd);
  const std::string op = external ? "launch" : "start";
  const ActivityDecl* decl = m.manifest.find(cmd.target);
  if (!decl) {
    log(op, args, "error(unknown activity)");
    throw DeviceError("unknown activity " + cmd.target);
  }
  if (external && !decl->exported && !decl->is_launcher) {
    log(op, args, "error(SecurityException)");
    throw SecurityError("SecurityException: " + cmd.target + " is not exported");
  }
  state_.interstitial.reset();

  const ActivityRuntime& rt = m.runtime.of(cmd.target);
  std::vector<ExtraLiteral> extras = cmd.extras;
  if (options_.satisfy_required_extras)
    for (const auto& req : rt.required_extras)
      if (!has_extra(extras, req)) {
        std::erase_if(extras, [&](const ExtraLiteral& l) { return l.key == req.key; });
        extras.push_back(dummies_->literal_for(cmd.target, req.key, req.type));
      }

  LaunchOutcome out;
  if (rt.requires_permission && !state_.granted_permissions.count(*rt.requires_permission)) {
    Interstitial dlg;
    dlg.kind = Interstitial::Kind::Permission;
    dlg.tree = permission_dialog(m.package_id, *rt.requires_permission);
    dlg.permission = *rt.requires_permission;
    dlg.pending = cmd;
    dlg.pending_external = external;
    state_.interstitial = std::move(dlg);
    out = settle(LaunchStatus::PermissionPrompt);
  } else if (rt.requires_login && !state_.logged_in && m.runtime.login_activity) {
    const std::string& login = *m.runtime.login_activity;
    state_.back_stack.push_back(StackEntry{login, {}, {}, render(login, {})});
    out = settle(LaunchStatus::Redirected);
  } else if (rt.crash_if_missing &&
             !std::all_of(rt.required_extras.begin(), rt.required_extras.end(),
                          [&](const ExtraDecl& d) { return has_extra(extras, d); })) {
    // The process dies; nothing of the app stays on screen.
    state_.back_stack.clear();
    Interstitial dlg;
    dlg.kind = Interstitial::Kind::Crash;
    dlg.tree = crash_dialog(m.package_id);
    state_.interstitial = std::move(dlg);
    out = settle(LaunchStatus::Crashed, std::string(kCrashCause));
  } else {
    state_.back_stack.push_back(StackEntry{cmd.target, extras, {}, render(cmd.target, extras)});
    out = settle(LaunchStatus::Rendered);
  }
  log(op, args, out.describe());
  return out;
}

LaunchOutcome Device::tap(std::string_view component_id) {
  const std::string id(component_id);
  if (state_.interstitial) {
    Interstitial dlg = *state_.interstitial;
    if (dlg.kind == Interstitial::Kind::Permission && id == kAllowId) {
      state_.granted_permissions.insert(dlg.permission);
      state_.interstitial.reset();
      log("tap", id, "granted(" + dlg.permission + ")");
      return start(*dlg.pending, dlg.pending_external);
    }
    if ((dlg.kind == Interstitial::Kind::Permission && id == kDenyId) ||
        (dlg.kind == Interstitial::Kind::Crash && id == kCloseId)) {
      state_.interstitial.reset();
      auto out = settle(LaunchStatus::Dismissed);
      log("tap", id, out.describe());
      return out;
    }
    log("tap", id, "error(unknown component)");
    throw DeviceError("no component '" + id + "' on the open dialog");
  }
  if (state_.back_stack.empty()) throw DeviceError("tap: no foreground page");
  const Node* node = state_.back_stack.back().page.layout_dump.find(id);
  if (!node) {
    log("tap", id, "error(unknown component)");
    throw DeviceError("no component '" + id + "' on " + state_.back_stack.back().activity);
  }
  if (!node->clickable) {
    log("tap", id, "error(not clickable)");
    throw DeviceError("component '" + id + "' is not clickable");
  }
  if (node->on_click) {
    LaunchCommand cmd{node->on_click->target, node->on_click->extras};
    log("tap", id, "launch(" + cmd.target + ")");
    return start(cmd, false);
  }
  auto out = settle(LaunchStatus::Rendered);
  log("tap", id, out.describe());
  return out;
}

std::optional<std::string> Device::resolve(const stmt::NewIntent& intent) const {
  const AppModel& m = app();
  if (intent.explicit_target) {
    const UnitDef* u = m.find_unit(*intent.explicit_target);
    if (u && u->kind == UnitKind::Activity && m.manifest.declares(u->name)) return u->name;
    return std::nullopt;
  }
  const IntentFilter& want = intent.implicit_spec;
  for (const auto& act : m.manifest.declared_activities) {
    for (const auto& f : act.intent_filters) {
      bool ok = !want.action || (f.action && *f.action == *want.action);
      for (const auto& c : want.categories) ok = ok && f.categories.count(c) != 0;
      ok = ok && (!want.data || f.data == want.data);
      ok = ok && (!want.mime_type || f.mime_type == want.mime_type);
      if (ok) return act.name;
    }
  }
  return std::nullopt;
}

namespace {
struct ProcessDied {};
}  // namespace

void Device::run_method(const MethodId& method, std::size_t context, std::vector<MethodId>& call_stack,
                        std::vector<CodeLaunch>& out) {
  if (static_cast<int>(call_stack.size()) >= kMaxCallDepth) return;
  if (std::find(call_stack.begin(), call_stack.end(), method) != call_stack.end()) return;
  const AppModel& m = app();
  const MethodDef* def = m.find_method(method.unit, method.method);
  if (!def) throw DeviceError("no method " + method.str());
  call_stack.push_back(method);

  struct Pending {
    const stmt::NewIntent* intent;
    std::vector<ExtraLiteral> extras;
  };
  std::map<std::string, Pending> intents;
  std::vector<std::string> txn;
  const std::string source = state_.back_stack[context].activity;

  for (const auto& s : def->body) {
    if (const auto* ni = std::get_if<stmt::NewIntent>(&s)) {
      intents[ni->var] = Pending{ni, {}};
    } else if (const auto* pe = std::get_if<stmt::PutExtra>(&s)) {
      if (auto it = intents.find(pe->var); it != intents.end())
        it->second.extras.push_back(dummies_->literal_for(source, pe->key, pe->type));
    } else if (const auto* pb = std::get_if<stmt::PutBundle>(&s)) {
      if (auto it = intents.find(pb->var); it != intents.end())
        for (const auto& e : pb->entries)
          it->second.extras.push_back(dummies_->literal_for(source, e.key, ExtraType::of(e.type)));
    } else if (const auto* st = std::get_if<stmt::StartActivity>(&s)) {
      auto it = intents.find(st->var);
      if (it == intents.end()) continue;
      auto target = resolve(*it->second.intent);
      if (!target) {
        log("start", method.str() + " " + st->var, "ActivityNotFound");
        continue;
      }
      LaunchOutcome outcome = start(LaunchCommand{*target, it->second.extras}, false);
      out.push_back(CodeLaunch{source, *target, outcome});
      if (state_.back_stack.size() <= context || state_.back_stack[context].activity != source) throw ProcessDied{};
    } else if (const auto* fa = std::get_if<stmt::FragmentAdd>(&s)) {
      txn.push_back(fa->fragment);
    } else if (const auto* fr = std::get_if<stmt::FragmentReplace>(&s)) {
      txn.push_back(fr->fragment);
    } else if (std::holds_alternative<stmt::FragmentCommit>(s)) {
      for (auto& f : txn) state_.back_stack[context].attached_fragments.insert(std::move(f));
      txn.clear();
    } else if (const auto* sa = std::get_if<stmt::SetAdapter>(&s)) {
      state_.back_stack[context].attached_fragments.insert(sa->fragment);
    } else if (const auto* c = std::get_if<stmt::Call>(&s)) {
      run_method(MethodId{c->unit, c->method}, context, call_stack, out);
    }
  }
  call_stack.pop_back();
}

std::vector<CodeLaunch> Device::invoke(const MethodId& method) {
  if (state_.interstitial || state_.back_stack.empty()) throw DeviceError("invoke: no foreground activity");
  std::vector<CodeLaunch> out;
  std::vector<MethodId> call_stack;
  const std::size_t context = state_.back_stack.size() - 1;
  log("invoke", method.str(), "in " + state_.back_stack[context].activity);
  try {
    run_method(method, context, call_stack, out);
  } catch (const ProcessDied&) {
    log("invoke", method.str(), "aborted(process died)");
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<MethodId> context_methods(const AppModel& model, const std::string& activity,
                                      const std::set<std::string>& attached_fragments) {
  std::vector<MethodId> out;
  for (const auto& u : model.units) {
    const UnitDef* root = chain_root(model, u);
    if (!root) continue;
    const bool mine = root->name == activity ||
                      (root->kind == UnitKind::Fragment && attached_fragments.count(root->name));
    if (!mine) continue;
    for (const auto& m : u.methods) out.push_back(MethodId{u.name, m.name});
  }
  return out;
}

namespace {

class GroundTruth {
 public:
  GroundTruth(const AppModel& model, const ExhaustiveOptions& options)
      : model_(model), options_(options), device_(options.seed, DeviceOptions{true}) {
    device_.install(instrument(model));
    device_.set_logged_in(true);
    for (const auto& [name, rt] : model.runtime.activities)
      if (rt.requires_permission) device_.grant_permission(*rt.requires_permission);
  }

  Atg run() {
    for (const auto& decl : model_.manifest.declared_activities) {
      explore_code(decl.name);
      explore_clicks(decl.name);
    }
    if (budget_hit_) atg_.note("command budget exhausted");
    return std::move(atg_);
  }

 private:
  bool spend() {
    if (commands_ >= options_.command_budget) {
      budget_hit_ = true;
      return false;
    }
    ++commands_;
    return true;
  }

  bool fresh_launch(const std::string& activity) {
    if (!spend()) return false;
    device_.force_stop();
    return device_.launch(LaunchCommand{activity, {}}).status == LaunchStatus::Rendered;
  }

  void explore_code(const std::string& activity) {
    if (!fresh_launch(activity)) return;
    std::set<MethodId> invoked;
    while (true) {
      bool progressed = false;
      for (const auto& m : context_methods(model_, activity, device_.state().back_stack.front().attached_fragments)) {
        if (invoked.count(m)) continue;
        if (!spend()) return;
        invoked.insert(m);
        progressed = true;
        for (const auto& launch : device_.invoke(m)) {
          const auto& o = launch.outcome;
          if ((o.status == LaunchStatus::Rendered || o.status == LaunchStatus::Redirected) && o.actual_activity)
            atg_.add(TransitionPair{launch.source, *o.actual_activity, Origin::Static, Via::direct()});
        }
        if (device_.state().back_stack.empty()) {
          if (!fresh_launch(activity)) return;
        }
        while (device_.state().back_stack.size() > 1 || device_.state().interstitial) device_.press_back();
      }
      if (!progressed) break;
    }
  }

  // Replays `path` from a fresh launch; false if it no longer applies.
  bool replay(const std::string& root, const std::vector<std::string>& path) {
    if (!fresh_launch(root)) return false;
    for (const auto& id : path) {
      if (!spend()) return false;
      if (device_.tap(id).status != LaunchStatus::Rendered) return false;
    }
    return true;
  }

  void explore_clicks(const std::string& root) {
    std::deque<std::vector<std::string>> queue{{}};
    std::set<std::string> seen{root};
    while (!queue.empty()) {
      std::vector<std::string> path = std::move(queue.front());
      queue.pop_front();
      if (!replay(root, path)) continue;
      const StackEntry* top = device_.top_entry();
      if (!top) continue;
      const std::string here = top->activity;
      std::vector<std::string> ids;
      for (const auto& c : top->page.components) {
        const Node* n = top->page.layout_dump.find(c.id);
        if (n && n->clickable) ids.push_back(c.id);
      }
      for (const auto& id : ids) {
        if (!replay(root, path) || !spend()) return;
        const std::size_t depth_before = device_.state().back_stack.size();
        LaunchOutcome o = device_.tap(id);
        if ((o.status != LaunchStatus::Rendered && o.status != LaunchStatus::Redirected) || !o.actual_activity ||
            device_.state().back_stack.size() != depth_before + 1)
          continue;
        atg_.add(TransitionPair{here, *o.actual_activity, Origin::Dynamic, Via::tap(id)});
        if (static_cast<int>(path.size()) + 1 < options_.max_depth && seen.insert(*o.actual_activity).second) {
          auto next = path;
          next.push_back(id);
          queue.push_back(std::move(next));
        }
      }
    }
  }

  const AppModel& model_;
  ExhaustiveOptions options_;
  Device device_;
  Atg atg_;
  int commands_ = 0;
  bool budget_hit_ = false;
};

}  // namespace

Atg run_exhaustive(const AppModel& model, const ExhaustiveOptions& options) {
  return GroundTruth(model, options).run();
}

}  // namespace storyboard
