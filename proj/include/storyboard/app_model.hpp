// SPDX-License-Identifier: Apache-2.0
//
// In-memory model of a subject app: manifest, class units with a
// statement-level IR, layout trees and the runtime behavior table that the
// virtual device consults when launching activities.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace storyboard {

inline constexpr int kGridWidth = 90;
inline constexpr int kGridHeight = 160;
inline constexpr int kPaletteSize = 16;

// ---------------------------------------------------------------------------
// Extras

enum class BasicType { String, Integer, Boolean, Float };

struct BundleEntry {
  std::string key;
  BasicType type = BasicType::String;
  auto operator<=>(const BundleEntry&) const = default;
};

/// Type of an intent extra. A bundle holds basic-typed entries only.
struct ExtraType {
  bool is_bundle = false;
  BasicType basic = BasicType::String;  // meaningful when !is_bundle
  std::vector<BundleEntry> entries;     // meaningful when is_bundle

  static ExtraType of(BasicType t) { return ExtraType{false, t, {}}; }
  static ExtraType bundle(std::vector<BundleEntry> e) {
    return ExtraType{true, BasicType::String, std::move(e)};
  }
  auto operator<=>(const ExtraType&) const = default;
};

struct ExtraDecl {
  std::string key;
  ExtraType type;
  auto operator<=>(const ExtraDecl&) const = default;
};

using BasicValue = std::variant<std::string, std::int64_t, bool, double>;

struct BundleValueEntry {
  std::string key;
  BasicValue value;
  bool operator==(const BundleValueEntry&) const = default;
};

using ExtraValue = std::variant<BasicValue, std::vector<BundleValueEntry>>;

/// A concrete <key, type, value> carried by a launch command.
struct ExtraLiteral {
  std::string key;
  ExtraType type;
  ExtraValue value;
  bool operator==(const ExtraLiteral&) const = default;
};

std::string to_string(BasicType t);
std::string to_string(const ExtraType& t);
std::optional<BasicType> basic_type_from(std::string_view token);
/// Inverse of to_string(const ExtraType&).
std::optional<ExtraType> extra_type_from(std::string_view text);
BasicType type_of(const BasicValue& v);
std::string format_value(const BasicValue& v);

// ---------------------------------------------------------------------------
// Manifest

struct IntentFilter {
  std::optional<std::string> action;
  std::set<std::string> categories;
  std::optional<std::string> data;
  std::optional<std::string> mime_type;

  bool empty() const {
    return !action && categories.empty() && !data && !mime_type;
  }
  bool operator==(const IntentFilter&) const = default;
};

struct ActivityDecl {
  std::string name;
  bool exported = false;
  bool is_launcher = false;
  std::vector<IntentFilter> intent_filters;
  bool operator==(const ActivityDecl&) const = default;
};

struct Manifest {
  std::vector<ActivityDecl> declared_activities;
  std::vector<std::string> declared_services;

  const ActivityDecl* find(std::string_view name) const;
  const ActivityDecl* launcher() const;
  bool declares(std::string_view name) const { return find(name) != nullptr; }
  bool operator==(const Manifest&) const = default;
};

// ---------------------------------------------------------------------------
// Statement IR

namespace stmt {

struct NewIntent {
  std::string var;
  std::optional<std::string> explicit_target;  // unit name
  IntentFilter implicit_spec;                  // used when no explicit target
  bool operator==(const NewIntent&) const = default;
};

struct PutExtra {
  std::string var;
  std::string key;
  ExtraType type;
  bool operator==(const PutExtra&) const = default;
};

struct PutBundle {
  std::string var;
  std::vector<BundleEntry> entries;
  bool operator==(const PutBundle&) const = default;
};

enum class StartApi { StartActivity, StartActivityForResult, StartActivityIfNeeded };

struct StartActivity {
  std::string var;
  StartApi api = StartApi::StartActivity;
  bool operator==(const StartActivity&) const = default;
};

struct GetExtra {
  ExtraType type;
  std::string key;
  bool operator==(const GetExtra&) const = default;
};

struct FragmentAdd {
  std::string fragment;
  bool operator==(const FragmentAdd&) const = default;
};

struct FragmentReplace {
  std::string fragment;
  bool operator==(const FragmentReplace&) const = default;
};

struct FragmentCommit {
  bool operator==(const FragmentCommit&) const = default;
};

struct SetAdapter {
  std::string fragment;
  bool operator==(const SetAdapter&) const = default;
};

struct Call {
  std::string unit;
  std::string method;
  bool operator==(const Call&) const = default;
};

struct Nop {
  bool operator==(const Nop&) const = default;
};

}  // namespace stmt

using Stmt = std::variant<stmt::NewIntent, stmt::PutExtra, stmt::PutBundle,
                          stmt::StartActivity, stmt::GetExtra,
                          stmt::FragmentAdd, stmt::FragmentReplace,
                          stmt::FragmentCommit, stmt::SetAdapter, stmt::Call,
                          stmt::Nop>;

struct MethodDef {
  std::string name;
  bool is_lifecycle = false;
  std::vector<Stmt> body;
  bool operator==(const MethodDef&) const = default;
};

/// onCreate / onStart / onResume
bool is_lifecycle_name(std::string_view method_name);

enum class UnitKind { Activity, Fragment, Inner, Service, Plain };

std::string to_string(UnitKind k);

struct UnitDef {
  std::string name;
  UnitKind kind = UnitKind::Plain;
  std::string outer;  // set iff kind == Inner
  std::vector<MethodDef> methods;
  std::optional<std::string> layout_ref;

  const MethodDef* find_method(std::string_view method) const;
  bool operator==(const UnitDef&) const = default;
};

// ---------------------------------------------------------------------------
// Layouts

enum class ComponentType {
  Button,
  ImageButton,
  TextView,
  EditText,
  ListView,
  GridView,
  RadioButton,
  WebViewPane,
  Container,
};

std::string to_string(ComponentType t);
std::optional<ComponentType> component_type_from(std::string_view token);

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.x + o.w <= x + w && o.y + o.h <= y + h;
  }
  bool operator==(const Rect&) const = default;
};

struct ClickLaunch {
  std::string target;
  std::vector<ExtraLiteral> extras;
  bool operator==(const ClickLaunch&) const = default;
};

struct Node {
  ComponentType type = ComponentType::Container;
  std::string id;
  bool clickable = false;
  std::optional<ClickLaunch> on_click;  // absent == ClickAction::None
  Rect bounds;
  std::string label;
  int color = 0;
  std::vector<Node> children;

  bool operator==(const Node&) const = default;
};

struct LayoutTree {
  Node root;

  const Node* find(std::string_view id) const;
  bool operator==(const LayoutTree&) const = default;
};

/// Button, ImageButton and clickable TextView.
bool is_interactive(const Node& n);

// ---------------------------------------------------------------------------
// Runtime behavior

enum class ExternalData { RemoteServer, LocalDb, WebAuth, Hardware, SlowLoad };

std::string to_string(ExternalData e);
std::optional<ExternalData> external_data_from(std::string_view token);

struct ActivityRuntime {
  std::vector<ExtraDecl> required_extras;
  bool crash_if_missing = false;
  std::optional<std::string> requires_permission;
  bool requires_login = false;
  std::optional<ExternalData> external_data;
  bool operator==(const ActivityRuntime&) const = default;
};

struct RuntimeSpec {
  std::optional<std::string> login_activity;
  std::map<std::string, ActivityRuntime> activities;

  const ActivityRuntime& of(const std::string& activity) const;
  bool operator==(const RuntimeSpec&) const = default;
};

// ---------------------------------------------------------------------------

struct AppModel {
  std::string package_id;
  int revision = 0;
  Manifest manifest;
  std::vector<UnitDef> units;
  std::map<std::string, LayoutTree> layouts;
  RuntimeSpec runtime;

  const UnitDef* find_unit(std::string_view name) const;
  const MethodDef* find_method(std::string_view unit, std::string_view method) const;
  /// Names of declared activities in manifest order.
  std::vector<std::string> activity_names() const;
  /// Layout of an activity or fragment unit, if any.
  const LayoutTree* layout_of(std::string_view unit) const;
  bool operator==(const AppModel&) const = default;
};

}  // namespace storyboard
