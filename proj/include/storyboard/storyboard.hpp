// SPDX-License-Identifier: Apache-2.0
//
// The storyboard document: ATG, rendered pages, code listings, call
// hierarchies, components, launch parameters and metrics for one app.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "storyboard/app_model.hpp"
#include "storyboard/call_graph.hpp"
#include "storyboard/device.hpp"
#include "storyboard/explore.hpp"
#include "storyboard/icc.hpp"
#include "storyboard/metrics.hpp"
#include "storyboard/static_atg.hpp"

namespace storyboard {

inline constexpr std::string_view kSchemaVersion = "1.0";

/// A cross-reference failure while assembling or loading a document.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Storyboard {
  std::string package_id;
  int revision = 0;
  std::vector<std::string> activities;  // manifest order
  std::string launcher;
  Atg atg;
  std::map<std::string, RenderedPage> pages;  // by actual activity
  std::map<std::string, std::string> activity_code;
  std::map<std::string, std::string> layout_code;
  std::map<std::string, std::vector<CallGraph::Edge>> call_hierarchy;
  std::map<std::string, std::vector<Component>> components;
  IccTable icc;
  std::map<std::string, ActivityOutcome> launch_outcomes;
  std::map<std::string, PhaseCounters> timings;
  MetricsReport metrics;

  bool operator==(const Storyboard&) const = default;
};

/// `report` is null for static-only runs. Throws DocumentError when an ATG
/// endpoint, page or ICC entry names an undeclared activity.
Storyboard assemble(const AppModel& model, const Atg& atg, const IccTable& icc,
                    const ExplorationReport* report, const CallGraph& cg);

/// Edges of `cg` whose caller belongs to `activity` or one of its inner
/// classes.
std::vector<CallGraph::Edge> call_hierarchy_of(const CallGraph& cg, const AppModel& model,
                                               const std::string& activity);

nlohmann::json to_json(const Storyboard& sb);
/// Throws DocumentError on a schema mismatch or malformed field.
Storyboard storyboard_from_json(const nlohmann::json& j);

/// Two-space indented JSON with a trailing newline.
std::string serialize_storyboard(const Storyboard& sb);
Storyboard load_storyboard_file(const std::string& path);

/// Mean page similarity over activities paged in both documents.
std::optional<Similarity> average_similarity(const Storyboard& a, const Storyboard& reference);

struct PipelineOptions {
  bool static_only = false;
  std::uint64_t seed = 0;
  int explore_depth = 1;
};

struct PipelineResult {
  AppModel instrumented;
  Atg static_atg;
  IccTable icc;
  std::optional<ExplorationReport> report;
  Storyboard storyboard;
  std::string session_log;
};

/// instrument, call graph, static ATG, ICC, then (unless static-only)
/// render, explore and merge; finally assemble.
PipelineResult run_pipeline(const AppModel& model, const PipelineOptions& options = {});

}  // namespace storyboard
