// SPDX-License-Identifier: Apache-2.0

#include "storyboard/storyboard.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "storyboard/app_format.hpp"
#include "storyboard/instrument.hpp"

namespace storyboard {

using nlohmann::json;

DocumentError::DocumentError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

namespace {

// Activity that owns `unit`, following the inner-class chain.
std::optional<std::string> owning_activity(const AppModel& model, const std::string& unit) {
  const UnitDef* u = model.find_unit(unit);
  for (int hops = 0; u && hops <= static_cast<int>(model.units.size()); ++hops) {
    if (u->kind == UnitKind::Activity) return u->name;
    if (u->kind != UnitKind::Inner) return std::nullopt;
    u = model.find_unit(u->outer);
  }
  return std::nullopt;
}

std::string activity_listing(const AppModel& model, const std::string& activity) {
  std::string out;
  for (const auto& u : model.units) {
    if (u.name == activity || (u.kind == UnitKind::Inner && owning_activity(model, u.name) == activity))
      out += serialize_unit(u);
  }
  return out;
}

void require_declared(const AppModel& model, const std::string& name, const std::string& path) {
  if (!model.manifest.declares(name)) throw DocumentError(path, "undeclared activity '" + name + "'");
}

// Services may start activities, so they are valid ATG sources.
void require_component(const AppModel& model, const std::string& name, const std::string& path) {
  const auto& svc = model.manifest.declared_services;
  if (std::find(svc.begin(), svc.end(), name) != svc.end()) return;
  require_declared(model, name, path);
}

// --- JSON helpers --------------------------------------------------------

template <typename T>
T field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw DocumentError(path + "." + key, "missing field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DocumentError(path + "." + key, e.what());
  }
}

const json& object_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw DocumentError(path + "." + key, "missing field");
  return j.at(key);
}

Origin origin_from(const std::string& s, const std::string& path) {
  if (s == "static") return Origin::Static;
  if (s == "dynamic") return Origin::Dynamic;
  throw DocumentError(path, "unknown origin '" + s + "'");
}

Via via_from(const std::string& s, const std::string& path) {
  if (s == "direct") return Via::direct();
  if (s == "inner_class") return Via::inner_class();
  if (s == "fragment") return Via::fragment();
  if (s.rfind("component:", 0) == 0) return Via::tap(s.substr(10));
  throw DocumentError(path, "unknown via '" + s + "'");
}

ActivityOutcome::Kind outcome_kind_from(const std::string& s, const std::string& path) {
  if (s == "launched") return ActivityOutcome::Kind::Launched;
  if (s == "crashed") return ActivityOutcome::Kind::Crashed;
  if (s == "unreachable") return ActivityOutcome::Kind::Unreachable;
  throw DocumentError(path, "unknown outcome '" + s + "'");
}

json component_json(const Component& c) {
  return {{"id", c.id},
          {"type", to_string(c.type)},
          {"clickable", c.clickable},
          {"bounds", {c.bounds.x, c.bounds.y, c.bounds.w, c.bounds.h}},
          {"label", c.label}};
}

Component component_from(const json& j, const std::string& path) {
  Component c;
  c.id = field<std::string>(j, "id", path);
  auto type = component_type_from(field<std::string>(j, "type", path));
  if (!type) throw DocumentError(path + ".type", "unknown component type");
  c.type = *type;
  c.clickable = field<bool>(j, "clickable", path);
  auto b = field<std::vector<int>>(j, "bounds", path);
  if (b.size() != 4) throw DocumentError(path + ".bounds", "expected [x, y, w, h]");
  c.bounds = Rect{b[0], b[1], b[2], b[3]};
  c.label = field<std::string>(j, "label", path);
  return c;
}

json primitive_json(const PrimitiveAttr& p) {
  switch (p.kind) {
    case PrimitiveAttr::Kind::Action: return {{"kind", "action"}, {"value", p.value}};
    case PrimitiveAttr::Kind::Data: return {{"kind", "data"}, {"value", p.value}};
    case PrimitiveAttr::Kind::Type: return {{"kind", "type"}, {"value", p.value}};
    case PrimitiveAttr::Kind::Category: return {{"kind", "category"}, {"categories", p.categories}};
  }
  return {};
}

PrimitiveAttr primitive_from(const json& j, const std::string& path) {
  PrimitiveAttr p;
  const auto kind = field<std::string>(j, "kind", path);
  if (kind == "category") {
    p.kind = PrimitiveAttr::Kind::Category;
    p.categories = field<std::set<std::string>>(j, "categories", path);
    return p;
  }
  if (kind == "action") p.kind = PrimitiveAttr::Kind::Action;
  else if (kind == "data") p.kind = PrimitiveAttr::Kind::Data;
  else if (kind == "type") p.kind = PrimitiveAttr::Kind::Type;
  else throw DocumentError(path + ".kind", "unknown primitive kind '" + kind + "'");
  p.value = field<std::string>(j, "value", path);
  return p;
}

json counters_json(const PhaseCounters& c) {
  return {{"launches", c.launches},
          {"taps", c.taps},
          {"force_stops", c.force_stops},
          {"permission_grants", c.permission_grants},
          {"crashes", c.crashes}};
}

PhaseCounters counters_from(const json& j, const std::string& path) {
  return PhaseCounters{field<int>(j, "launches", path), field<int>(j, "taps", path),
                       field<int>(j, "force_stops", path), field<int>(j, "permission_grants", path),
                       field<int>(j, "crashes", path)};
}

}  // namespace

std::vector<CallGraph::Edge> call_hierarchy_of(const CallGraph& cg, const AppModel& model,
                                               const std::string& activity) {
  std::vector<CallGraph::Edge> out;
  for (const auto& e : cg.edges())
    if (owning_activity(model, e.first.unit) == activity) out.push_back(e);
  return out;
}

Storyboard assemble(const AppModel& model, const Atg& atg, const IccTable& icc,
                    const ExplorationReport* report, const CallGraph& cg) {
  Storyboard sb;
  sb.package_id = model.package_id;
  sb.revision = model.revision;
  sb.activities = model.activity_names();
  if (const ActivityDecl* l = model.manifest.launcher()) sb.launcher = l->name;

  const auto pairs = atg.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "atg.pairs[" + std::to_string(i) + "]";
    require_component(model, pairs[i].source, path + ".source");
    require_declared(model, pairs[i].target, path + ".target");
  }
  if (!atg.pending_fragment_edges().empty())
    throw DocumentError("atg", "unmerged fragment edges remain");
  sb.atg = atg;

  for (const auto& [act, params] : icc.entries) require_declared(model, act, "icc." + act);
  sb.icc = icc;

  for (const auto& act : sb.activities) {
    sb.activity_code[act] = activity_listing(model, act);
    const UnitDef* u = model.find_unit(act);
    if (const LayoutTree* layout = model.layout_of(act))
      sb.layout_code[act] = serialize_layout(u && u->layout_ref ? *u->layout_ref : act, *layout);
    sb.call_hierarchy[act] = call_hierarchy_of(cg, model, act);
  }

  if (report) {
    for (const auto& [act, page] : report->pages) {
      require_declared(model, act, "pages." + act);
      if (page.activity != act) throw DocumentError("pages." + act, "page filed under another activity");
    }
    sb.pages = report->pages;
    for (const auto& [act, outcome] : report->outcomes) require_declared(model, act, "launch_outcomes." + act);
    sb.launch_outcomes = report->outcomes;
    sb.timings = report->timings;
  }

  // Components come from the rendered page when one exists, else from the
  // declared layout.
  for (const auto& act : sb.activities) {
    auto it = sb.pages.find(act);
    if (it != sb.pages.end()) sb.components[act] = it->second.components;
    else if (const LayoutTree* layout = model.layout_of(act)) sb.components[act] = list_components(*layout);
  }

  sb.metrics.transition_pairs = atg.size();
  sb.metrics.activity_coverage = coverage(atg, model.manifest);
  if (report) sb.metrics.launch_ratio = launch_ratio(*report, model.manifest);
  return sb;
}

json to_json(const Storyboard& sb) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["app"] = {{"package_id", sb.package_id}, {"revision", sb.revision}};
  j["activities"] = sb.activities;
  j["launcher"] = sb.launcher;

  json pairs = json::array();
  for (const auto& p : sb.atg.pairs())
    pairs.push_back({{"source", p.source},
                     {"target", p.target},
                     {"origin", to_string(p.origin)},
                     {"via", to_string(p.via)}});
  j["atg"] = {{"pairs", pairs}, {"diagnostics", sb.atg.diagnostics()}};

  json pages = json::object();
  for (const auto& [act, page] : sb.pages) {
    pages[act] = {{"layout", serialize_layout(act, page.layout_dump)},
                  {"raster", {{"width", page.raster.width},
                              {"height", page.raster.height},
                              {"cells", page.raster.cells}}}};
  }
  j["pages"] = pages;

  j["activity_code"] = sb.activity_code;
  j["layout_code"] = sb.layout_code;

  json hierarchy = json::object();
  for (const auto& [act, edges] : sb.call_hierarchy) {
    json list = json::array();
    for (const auto& [from, to] : edges) list.push_back({from.str(), to.str()});
    hierarchy[act] = list;
  }
  j["call_hierarchy"] = hierarchy;

  json comps = json::object();
  for (const auto& [act, list] : sb.components) {
    json arr = json::array();
    for (const auto& c : list) arr.push_back(component_json(c));
    comps[act] = arr;
  }
  j["components"] = comps;

  json icc = json::object();
  for (const auto& [act, params] : sb.icc.entries) {
    json prims = json::array();
    for (const auto& p : params.primitives) prims.push_back(primitive_json(p));
    json extras = json::array();
    for (const auto& e : params.extras) extras.push_back({{"key", e.key}, {"type", to_string(e.type)}});
    icc[act] = {{"primitives", prims}, {"extras", extras}};
  }
  j["icc"] = icc;

  json outcomes = json::object();
  for (const auto& [act, o] : sb.launch_outcomes) outcomes[act] = {{"kind", to_string(o.kind)}, {"detail", o.detail}};
  j["launch_outcomes"] = outcomes;

  json timings = json::object();
  for (const auto& [phase, c] : sb.timings) timings[phase] = counters_json(c);
  j["timings"] = timings;

  json metrics = {{"transition_pairs", sb.metrics.transition_pairs},
                  {"activity_coverage", sb.metrics.activity_coverage}};
  metrics["launch_ratio"] = sb.metrics.launch_ratio ? json(*sb.metrics.launch_ratio) : json(nullptr);
  metrics["similarity"] = sb.metrics.similarity
                              ? json{{"mae_sim", sb.metrics.similarity->mae_sim},
                                     {"mse_sim", sb.metrics.similarity->mse_sim}}
                              : json(nullptr);
  j["metrics"] = metrics;
  return j;
}

namespace {

MethodId method_from(const std::string& s, const std::string& path) {
  auto dot = s.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == s.size())
    throw DocumentError(path, "expected Unit.method, got '" + s + "'");
  return MethodId{s.substr(0, dot), s.substr(dot + 1)};
}

}  // namespace

Storyboard storyboard_from_json(const json& j) {
  if (!j.is_object()) throw DocumentError("$", "document is not an object");
  const auto version = field<std::string>(j, "schema_version", "$");
  if (version != kSchemaVersion)
    throw DocumentError("$.schema_version", "expected " + std::string(kSchemaVersion) + ", got " + version);

  Storyboard sb;
  const json& app = object_field(j, "app", "$");
  sb.package_id = field<std::string>(app, "package_id", "$.app");
  sb.revision = field<int>(app, "revision", "$.app");
  sb.activities = field<std::vector<std::string>>(j, "activities", "$");
  sb.launcher = field<std::string>(j, "launcher", "$");

  const json& atg = object_field(j, "atg", "$");
  const json& pairs = object_field(atg, "pairs", "$.atg");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "$.atg.pairs[" + std::to_string(i) + "]";
    TransitionPair p;
    p.source = field<std::string>(pairs[i], "source", path);
    p.target = field<std::string>(pairs[i], "target", path);
    p.origin = origin_from(field<std::string>(pairs[i], "origin", path), path + ".origin");
    p.via = via_from(field<std::string>(pairs[i], "via", path), path + ".via");
    if (!sb.atg.add(p)) throw DocumentError(path, "duplicate pair");
  }
  for (auto& d : field<std::vector<std::string>>(atg, "diagnostics", "$.atg")) sb.atg.note(std::move(d));

  for (const auto& [act, pj] : object_field(j, "pages", "$").items()) {
    const std::string path = "$.pages." + act;
    RenderedPage page;
    page.activity = act;
    try {
      page.layout_dump = parse_layout_text(field<std::string>(pj, "layout", path)).second;
    } catch (const ParseError& e) {
      throw DocumentError(path + ".layout", e.what());
    }
    const json& r = object_field(pj, "raster", path);
    page.raster.width = field<int>(r, "width", path + ".raster");
    page.raster.height = field<int>(r, "height", path + ".raster");
    page.raster.cells = field<std::vector<std::uint8_t>>(r, "cells", path + ".raster");
    if (page.raster.cells.size() != static_cast<std::size_t>(page.raster.width) * page.raster.height)
      throw DocumentError(path + ".raster.cells", "size does not match width x height");
    page.components = list_components(page.layout_dump);
    sb.pages.emplace(act, std::move(page));
  }

  sb.activity_code = field<std::map<std::string, std::string>>(j, "activity_code", "$");
  sb.layout_code = field<std::map<std::string, std::string>>(j, "layout_code", "$");

  for (const auto& [act, edges] : object_field(j, "call_hierarchy", "$").items()) {
    auto& out = sb.call_hierarchy[act];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string path = "$.call_hierarchy." + act + "[" + std::to_string(i) + "]";
      if (!edges[i].is_array() || edges[i].size() != 2 || !edges[i][0].is_string() || !edges[i][1].is_string())
        throw DocumentError(path, "expected [caller, callee]");
      out.emplace_back(method_from(edges[i][0].get<std::string>(), path),
                       method_from(edges[i][1].get<std::string>(), path));
    }
  }

  for (const auto& [act, list] : object_field(j, "components", "$").items()) {
    auto& out = sb.components[act];
    for (std::size_t i = 0; i < list.size(); ++i)
      out.push_back(component_from(list[i], "$.components." + act + "[" + std::to_string(i) + "]"));
  }

  for (const auto& [act, pj] : object_field(j, "icc", "$").items()) {
    const std::string path = "$.icc." + act;
    ParamSet& ps = sb.icc.entries[act];
    const json& prims = object_field(pj, "primitives", path);
    for (std::size_t i = 0; i < prims.size(); ++i)
      ps.primitives.push_back(primitive_from(prims[i], path + ".primitives[" + std::to_string(i) + "]"));
    const json& extras = object_field(pj, "extras", path);
    for (std::size_t i = 0; i < extras.size(); ++i) {
      const std::string ep = path + ".extras[" + std::to_string(i) + "]";
      auto type = extra_type_from(field<std::string>(extras[i], "type", ep));
      if (!type) throw DocumentError(ep + ".type", "unknown extra type");
      ps.extras.push_back(ExtraParam{field<std::string>(extras[i], "key", ep), *type});
    }
  }

  for (const auto& [act, oj] : object_field(j, "launch_outcomes", "$").items()) {
    const std::string path = "$.launch_outcomes." + act;
    sb.launch_outcomes[act] =
        ActivityOutcome{outcome_kind_from(field<std::string>(oj, "kind", path), path + ".kind"),
                        field<std::string>(oj, "detail", path)};
  }

  for (const auto& [phase, cj] : object_field(j, "timings", "$").items())
    sb.timings[phase] = counters_from(cj, "$.timings." + phase);

  const json& m = object_field(j, "metrics", "$");
  sb.metrics.transition_pairs = field<std::size_t>(m, "transition_pairs", "$.metrics");
  sb.metrics.activity_coverage = field<double>(m, "activity_coverage", "$.metrics");
  if (const json& lr = object_field(m, "launch_ratio", "$.metrics"); !lr.is_null())
    sb.metrics.launch_ratio = field<double>(m, "launch_ratio", "$.metrics");
  if (const json& s = object_field(m, "similarity", "$.metrics"); !s.is_null())
    sb.metrics.similarity = Similarity{field<double>(s, "mae_sim", "$.metrics.similarity"),
                                       field<double>(s, "mse_sim", "$.metrics.similarity")};
  return sb;
}

std::string serialize_storyboard(const Storyboard& sb) { return to_json(sb).dump(2) + "\n"; }

Storyboard load_storyboard_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(path, "cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DocumentError(path, e.what());
  }
  return storyboard_from_json(j);
}

std::optional<Similarity> average_similarity(const Storyboard& a, const Storyboard& reference) {
  double mae = 0.0;
  double mse = 0.0;
  std::size_t n = 0;
  for (const auto& [act, page] : a.pages) {
    auto it = reference.pages.find(act);
    if (it == reference.pages.end()) continue;
    const Similarity s = page_similarity(page.raster, it->second.raster);
    mae += s.mae_sim;
    mse += s.mse_sim;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return Similarity{mae / static_cast<double>(n), mse / static_cast<double>(n)};
}

PipelineResult run_pipeline(const AppModel& model, const PipelineOptions& options) {
  PipelineResult r;
  r.instrumented = instrument(model);
  const CallGraph cg = build_call_graph(r.instrumented);
  r.static_atg = extract_static_atg(r.instrumented, cg);
  r.icc = extract_icc(r.instrumented, cg);

  if (options.static_only) {
    r.storyboard = assemble(r.instrumented, r.static_atg, r.icc, nullptr, cg);
    return r;
  }

  Device device(options.seed);
  device.install(r.instrumented);
  ExplorationReport report = render_all(r.instrumented, r.icc, device);
  const auto dynamic = explore_components(r.instrumented, report, device, r.static_atg, options.explore_depth);
  const Atg hybrid = hybrid_atg(r.static_atg, dynamic);
  r.session_log = device.session_log();
  r.storyboard = assemble(r.instrumented, hybrid, r.icc, &report, cg);
  r.report = std::move(report);
  return r;
}

}  // namespace storyboard
