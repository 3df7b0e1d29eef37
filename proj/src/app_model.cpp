// SPDX-License-Identifier: Apache-2.0

#include "storyboard/app_model.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace storyboard {

std::string to_string(BasicType t) {
  switch (t) {
    case BasicType::String: return "string";
    case BasicType::Integer: return "int";
    case BasicType::Boolean: return "bool";
    case BasicType::Float: return "float";
  }
  return "?";
}

std::string to_string(const ExtraType& t) {
  if (!t.is_bundle) return to_string(t.basic);
  std::string out = "bundle{";
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    if (i) out += ',';
    out += t.entries[i].key + ":" + to_string(t.entries[i].type);
  }
  return out + "}";
}

std::optional<BasicType> basic_type_from(std::string_view token) {
  if (token == "string") return BasicType::String;
  if (token == "int") return BasicType::Integer;
  if (token == "bool") return BasicType::Boolean;
  if (token == "float") return BasicType::Float;
  return std::nullopt;
}

std::optional<ExtraType> extra_type_from(std::string_view text) {
  if (auto b = basic_type_from(text)) return ExtraType::of(*b);
  if (text.substr(0, 7) != "bundle{" || text.back() != '}') return std::nullopt;
  std::string_view body = text.substr(7, text.size() - 8);
  std::vector<BundleEntry> entries;
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    auto colon = item.rfind(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    auto t = basic_type_from(item.substr(colon + 1));
    if (!t) return std::nullopt;
    entries.push_back(BundleEntry{std::string(item.substr(0, colon)), *t});
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return ExtraType::bundle(std::move(entries));
}

BasicType type_of(const BasicValue& v) {
  switch (v.index()) {
    case 0: return BasicType::String;
    case 1: return BasicType::Integer;
    case 2: return BasicType::Boolean;
    default: return BasicType::Float;
  }
}

std::string format_value(const BasicValue& v) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const {
      std::ostringstream os;
      os.precision(17);
      os << d;
      std::string s = os.str();
      if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
      return s;
    }
  };
  return std::visit(Visitor{}, v);
}

const ActivityDecl* Manifest::find(std::string_view name) const {
  auto it = std::find_if(declared_activities.begin(), declared_activities.end(),
                         [&](const ActivityDecl& a) { return a.name == name; });
  return it == declared_activities.end() ? nullptr : &*it;
}

const ActivityDecl* Manifest::launcher() const {
  auto it = std::find_if(declared_activities.begin(), declared_activities.end(),
                         [](const ActivityDecl& a) { return a.is_launcher; });
  return it == declared_activities.end() ? nullptr : &*it;
}

bool is_lifecycle_name(std::string_view method_name) {
  return method_name == "onCreate" || method_name == "onStart" ||
         method_name == "onResume";
}

std::string to_string(UnitKind k) {
  switch (k) {
    case UnitKind::Activity: return "activity";
    case UnitKind::Fragment: return "fragment";
    case UnitKind::Inner: return "inner";
    case UnitKind::Service: return "service";
    case UnitKind::Plain: return "plain";
  }
  return "?";
}

const MethodDef* UnitDef::find_method(std::string_view method) const {
  for (const auto& m : methods)
    if (m.name == method) return &m;
  return nullptr;
}

namespace {
constexpr std::array<std::pair<ComponentType, std::string_view>, 9> kComponentNames{{
    {ComponentType::Button, "Button"},
    {ComponentType::ImageButton, "ImageButton"},
    {ComponentType::TextView, "TextView"},
    {ComponentType::EditText, "EditText"},
    {ComponentType::ListView, "ListView"},
    {ComponentType::GridView, "GridView"},
    {ComponentType::RadioButton, "RadioButton"},
    {ComponentType::WebViewPane, "WebView"},
    {ComponentType::Container, "Container"},
}};

constexpr std::array<std::pair<ExternalData, std::string_view>, 5> kExternalNames{{
    {ExternalData::RemoteServer, "remote-server"},
    {ExternalData::LocalDb, "local-db"},
    {ExternalData::WebAuth, "web-auth"},
    {ExternalData::Hardware, "hardware"},
    {ExternalData::SlowLoad, "slow-load"},
}};
}  // namespace

std::string to_string(ComponentType t) {
  for (const auto& [k, v] : kComponentNames)
    if (k == t) return std::string(v);
  return "?";
}

std::optional<ComponentType> component_type_from(std::string_view token) {
  for (const auto& [k, v] : kComponentNames)
    if (v == token) return k;
  return std::nullopt;
}

std::string to_string(ExternalData e) {
  for (const auto& [k, v] : kExternalNames)
    if (k == e) return std::string(v);
  return "?";
}

std::optional<ExternalData> external_data_from(std::string_view token) {
  for (const auto& [k, v] : kExternalNames)
    if (v == token) return k;
  return std::nullopt;
}

namespace {
const Node* find_node(const Node& n, std::string_view id) {
  if (n.id == id) return &n;
  for (const auto& c : n.children)
    if (const Node* hit = find_node(c, id)) return hit;
  return nullptr;
}
}  // namespace

const Node* LayoutTree::find(std::string_view id) const { return find_node(root, id); }

bool is_interactive(const Node& n) {
  switch (n.type) {
    case ComponentType::Button:
    case ComponentType::ImageButton:
      return true;
    case ComponentType::TextView:
      return n.clickable;
    default:
      return false;
  }
}

const ActivityRuntime& RuntimeSpec::of(const std::string& activity) const {
  static const ActivityRuntime kDefault{};
  auto it = activities.find(activity);
  return it == activities.end() ? kDefault : it->second;
}

const UnitDef* AppModel::find_unit(std::string_view name) const {
  for (const auto& u : units)
    if (u.name == name) return &u;
  return nullptr;
}

const MethodDef* AppModel::find_method(std::string_view unit, std::string_view method) const {
  const UnitDef* u = find_unit(unit);
  return u ? u->find_method(method) : nullptr;
}

std::vector<std::string> AppModel::activity_names() const {
  std::vector<std::string> out;
  out.reserve(manifest.declared_activities.size());
  for (const auto& a : manifest.declared_activities) out.push_back(a.name);
  return out;
}

const LayoutTree* AppModel::layout_of(std::string_view unit) const {
  const UnitDef* u = find_unit(unit);
  if (!u || !u->layout_ref) return nullptr;
  auto it = layouts.find(*u->layout_ref);
  return it == layouts.end() ? nullptr : &it->second;
}

}  // namespace storyboard
