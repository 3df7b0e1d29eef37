// SPDX-License-Identifier: Apache-2.0
//
// Per-activity launch parameters: manifest primitive attributes plus the
// <key, type> extras read by lifecycle code.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "storyboard/app_model.hpp"
#include "storyboard/call_graph.hpp"

namespace storyboard {

struct PrimitiveAttr {
  enum class Kind { Action, Category, Data, Type };
  Kind kind = Kind::Action;
  std::string value;                // Action, Data, Type
  std::set<std::string> categories;  // Category

  bool operator==(const PrimitiveAttr&) const = default;
};

std::string to_string(const PrimitiveAttr& p);

struct ExtraParam {
  std::string key;
  ExtraType type;
  bool operator==(const ExtraParam&) const = default;
};

struct ParamSet {
  std::vector<PrimitiveAttr> primitives;
  std::vector<ExtraParam> extras;

  /// Both return false when an equal element is already present.
  bool add(PrimitiveAttr p);
  bool add(ExtraParam e);
  bool empty() const { return primitives.empty() && extras.empty(); }
  bool operator==(const ParamSet&) const = default;
};

struct IccTable {
  std::map<std::string, ParamSet> entries;

  const ParamSet& of(const std::string& activity) const;
  /// `activity: [primitives] / [key:type, ...]` per line, sorted.
  std::string dump() const;
  bool operator==(const IccTable&) const = default;
};

struct IccOptions {
  bool include_on_resume = true;
  int depth_cap = 32;
};

/// Extras read in `method` and, recursively, in its callees. Revisits are
/// skipped and descent stops `depth_cap` calls deep.
ParamSet get_extras(const AppModel& model, const CallGraph& cg, const MethodId& method, ParamSet acc,
                    const IccOptions& options = {});

IccTable extract_icc(const AppModel& model, const CallGraph& cg, const IccOptions& options = {});

}  // namespace storyboard
