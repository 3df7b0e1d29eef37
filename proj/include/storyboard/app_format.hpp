// SPDX-License-Identifier: Apache-2.0
//
// Reader and writer for the mini-app document format (docs/format.md).

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "storyboard/app_model.hpp"

namespace storyboard {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ModelError : public std::runtime_error {
 public:
  enum class Kind { Reference, Duplicate, Invariant };
  ModelError(Kind kind, std::string path, const std::string& message);
  Kind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  Kind kind_;
  std::string path_;
};

/// Syntax-level parse. The result may still violate model invariants.
AppModel parse_document(std::string_view text);

/// parse_document followed by validate(); throws ModelError on the first
/// diagnostic.
AppModel parse_app(std::string_view text);

AppModel load_app_file(const std::string& path);

/// Canonical text form. parse_document(serialize_app(m)) == m.
std::string serialize_app(const AppModel& model);

/// Parses a single `layout <id> ... end` block.
std::pair<std::string, LayoutTree> parse_layout_text(std::string_view text);

std::string serialize_unit(const UnitDef& unit);
std::string serialize_layout(const std::string& id, const LayoutTree& layout);
std::string format_stmt(const Stmt& s);

}  // namespace storyboard
