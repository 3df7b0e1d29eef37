// SPDX-License-Identifier: Apache-2.0
//
// storyboard distill | oracle | compare | rollup

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "storyboard/app_format.hpp"
#include "storyboard/device.hpp"
#include "storyboard/storyboard.hpp"

namespace fs = std::filesystem;
using namespace storyboard;

namespace {

constexpr int kExitInput = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct DistillArgs {
  std::string app;
  std::string out;
  bool static_only = false;
  std::uint64_t seed = 0;
  int explore_depth = 1;
  bool dump_atg = false;
  bool dump_icc = false;
  bool metrics = false;
  std::string reference;
  std::string ppm_dir;
  std::string session_log;
};

int distill(const DistillArgs& a) {
  const AppModel model = load_app_file(a.app);
  PipelineOptions opts;
  opts.static_only = a.static_only;
  opts.seed = a.seed;
  opts.explore_depth = a.explore_depth;
  PipelineResult r = run_pipeline(model, opts);

  if (!a.reference.empty()) r.storyboard.metrics.similarity = average_similarity(r.storyboard, load_storyboard_file(a.reference));

  write_file(a.out, serialize_storyboard(r.storyboard));
  if (!a.ppm_dir.empty()) {
    fs::create_directories(a.ppm_dir);
    for (const auto& [act, page] : r.storyboard.pages) write_file(fs::path(a.ppm_dir) / (act + ".ppm"), to_ppm(page.raster));
  }
  if (!a.session_log.empty()) write_file(a.session_log, r.session_log);

  if (a.dump_atg) std::cout << r.storyboard.atg.dump();
  if (a.dump_icc) std::cout << r.icc.dump();
  if (a.metrics) std::cout << to_json(r.storyboard)["metrics"].dump(2) << "\n";
  return 0;
}

int oracle(const std::string& app, std::uint64_t seed, int max_depth) {
  const AppModel model = load_app_file(app);
  ExhaustiveOptions opts;
  opts.seed = seed;
  opts.max_depth = max_depth;
  std::cout << run_exhaustive(model, opts).dump();
  return 0;
}

int compare(const std::string& a_path, const std::string& b_path) {
  const Atg a = parse_atg_dump(read_file(a_path));
  const Atg b = parse_atg_dump(read_file(b_path));
  const auto ea = a.edges();
  const auto eb = b.edges();
  int changes = 0;
  for (const auto& e : eb)
    if (!ea.count(e)) {
      std::cout << "+ " << e.first << " -> " << e.second << "\n";
      ++changes;
    }
  for (const auto& e : ea)
    if (!eb.count(e)) {
      std::cout << "- " << e.first << " -> " << e.second << "\n";
      ++changes;
    }
  std::cerr << changes << " difference(s)\n";
  return 0;
}

std::string csv_optional(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(6);
  os << *v;
  return os.str();
}

int rollup(const std::vector<std::string>& docs) {
  std::cout << "package,revision,activities,transition_pairs,activity_coverage,launch_ratio,mae_sim,mse_sim\n";
  for (const auto& path : docs) {
    const Storyboard sb = load_storyboard_file(path);
    const auto& m = sb.metrics;
    std::optional<double> mae, mse;
    if (m.similarity) {
      mae = m.similarity->mae_sim;
      mse = m.similarity->mse_sim;
    }
    std::cout << sb.package_id << ',' << sb.revision << ',' << sb.activities.size() << ',' << m.transition_pairs << ','
              << csv_optional(m.activity_coverage) << ',' << csv_optional(m.launch_ratio) << ',' << csv_optional(mae)
              << ',' << csv_optional(mse) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Storyboard extraction for mini-app models"};
  app.require_subcommand(1);

  DistillArgs d;
  auto* distill_cmd = app.add_subcommand("distill", "Build a storyboard document for an app");
  distill_cmd->add_option("app", d.app, "App model file")->required()->check(CLI::ExistingFile);
  distill_cmd->add_option("-o,--output", d.out, "Storyboard JSON output")->required();
  distill_cmd->add_flag("--static-only", d.static_only, "Skip the device phases");
  distill_cmd->add_option("--seed", d.seed, "Device seed");
  distill_cmd->add_option("--explore-depth", d.explore_depth, "Tap exploration depth")->check(CLI::Range(1, 16));
  distill_cmd->add_flag("--dump-atg", d.dump_atg, "Print the ATG");
  distill_cmd->add_flag("--dump-icc", d.dump_icc, "Print the ICC table");
  distill_cmd->add_flag("--metrics", d.metrics, "Print metrics as JSON");
  distill_cmd->add_option("--reference", d.reference, "Storyboard to compare page rasters against")
      ->check(CLI::ExistingFile);
  distill_cmd->add_option("--ppm-dir", d.ppm_dir, "Write one PPM per rendered page");
  distill_cmd->add_option("--session-log", d.session_log, "Write the device session log");

  std::string oracle_app;
  std::uint64_t oracle_seed = 0;
  int oracle_depth = 6;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the ground-truth ATG");
  oracle_cmd->add_option("app", oracle_app, "App model file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--seed", oracle_seed, "Device seed");
  oracle_cmd->add_option("--max-depth", oracle_depth, "Click path depth")->check(CLI::Range(1, 32));

  std::string cmp_a, cmp_b;
  auto* compare_cmd = app.add_subcommand("compare", "Diff two ATG dumps");
  compare_cmd->add_option("a", cmp_a, "Baseline ATG dump")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("b", cmp_b, "Other ATG dump")->required()->check(CLI::ExistingFile);

  std::vector<std::string> rollup_docs;
  auto* rollup_cmd = app.add_subcommand("rollup", "CSV of metrics over storyboard documents");
  rollup_cmd->add_option("documents", rollup_docs, "Storyboard JSON files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*distill_cmd) return distill(d);
    if (*oracle_cmd) return oracle(oracle_app, oracle_seed, oracle_depth);
    if (*compare_cmd) return compare(cmp_a, cmp_b);
    if (*rollup_cmd) return rollup(rollup_docs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitInput;
  } catch (const DocumentError& e) {
    std::cerr << "invalid document: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
