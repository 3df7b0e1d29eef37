// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "storyboard/app_format.hpp"

namespace fs = std::filesystem;

namespace storyboard::fixtures {

std::string corpus_dir() { return STORYBOARD_CORPUS_DIR; }

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(corpus_dir()))
    if (entry.path().extension() == ".app") out.push_back(entry.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AppModel load_fixture(const std::string& name) { return load_app_file(corpus_dir() + "/" + name + ".app"); }

// Lines: `static A -> B` or `click A -> B`; `#` starts a comment.
Expectation load_expectation(const std::string& name) {
  Expectation e;
  std::istringstream in(read_text(corpus_dir() + "/" + name + ".expect"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, from, arrow, to;
    ls >> kind >> from >> arrow >> to;
    if (arrow != "->" || to.empty()) throw std::runtime_error(name + ".expect: bad line '" + line + "'");
    if (kind == "static")
      e.static_pairs.emplace(from, to);
    else if (kind == "click")
      e.click_only.emplace(from, to);
    else
      throw std::runtime_error(name + ".expect: unknown kind '" + kind + "'");
  }
  return e;
}

}  // namespace storyboard::fixtures
