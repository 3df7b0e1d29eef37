// SPDX-License-Identifier: Apache-2.0
//
// Byte comparisons against checked-in outputs. Run with
// STORYBOARD_UPDATE_GOLDEN=1 to rewrite them after an intended change.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "storyboard/app_format.hpp"
#include "storyboard/storyboard.hpp"
#include "support.hpp"

using namespace storyboard;

namespace {

namespace fs = std::filesystem;

bool updating() {
  const char* v = std::getenv("STORYBOARD_UPDATE_GOLDEN");
  return v && std::string(v) == "1";
}

void check_golden(const std::string& file, const std::string& actual) {
  const fs::path path = fs::path(STORYBOARD_GOLDEN_DIR) / file;
  if (updating()) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << path << " missing; rerun with STORYBOARD_UPDATE_GOLDEN=1";
  EXPECT_EQ(fixtures::read_text(path.string()), actual) << file;
}

TEST(Golden, CanonicalAppText) {
  for (const auto& name : fixtures::corpus_names())
    check_golden(name + ".canonical.app", serialize_app(fixtures::load_fixture(name)));
}

TEST(Golden, CanonicalTextParsesToItself) {
  for (const auto& name : fixtures::corpus_names()) {
    const std::string text = serialize_app(fixtures::load_fixture(name));
    EXPECT_EQ(serialize_app(parse_app(text)), text) << name;
  }
}

TEST(Golden, HybridAtgDumps) {
  for (const auto& name : fixtures::corpus_names())
    check_golden(name + ".atg", run_pipeline(fixtures::load_fixture(name)).storyboard.atg.dump());
}

TEST(Golden, VespucciStoryboard) {
  check_golden("vespucci-mini.storyboard.json",
               serialize_storyboard(run_pipeline(fixtures::load_fixture("vespucci-mini")).storyboard));
}

}  // namespace
