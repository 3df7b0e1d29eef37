// SPDX-License-Identifier: Apache-2.0
//
// Corpus access shared by the unit tests and the acceptance runner.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "storyboard/app_model.hpp"
#include "storyboard/static_atg.hpp"

namespace storyboard::fixtures {

struct Expectation {
  std::set<Edge> static_pairs;
  std::set<Edge> click_only;
};

std::string corpus_dir();
/// Fixture names (file stem) in lexicographic order.
std::vector<std::string> corpus_names();
AppModel load_fixture(const std::string& name);
Expectation load_expectation(const std::string& name);
std::string read_text(const std::string& path);

}  // namespace storyboard::fixtures
