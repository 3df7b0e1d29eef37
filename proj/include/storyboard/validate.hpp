// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "storyboard/app_model.hpp"

namespace storyboard {

struct Diagnostic {
  enum class Category { Reference, Duplicate, Invariant };
  Category category = Category::Invariant;
  std::string path;     // e.g. "unit/Main/method/onCreate/stmt/3"
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

/// Checks every AppModel invariant. Empty result iff the model is valid.
std::vector<Diagnostic> validate(const AppModel& model);

/// Labels that would be mistaken for device dialogs by keyword detection.
bool is_reserved_label(std::string_view label);

}  // namespace storyboard
