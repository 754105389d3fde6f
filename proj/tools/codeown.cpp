// codeown: commit-based vs line-based code ownership for release windows.
//
//   codeown mine     --repo R --window 1.0=v1.0 --window 2.0=v1.0..v2.0
//   codeown analyze  --window ...          (reads the snapshots written by mine)
//   codeown features --window ... [--labels L] [--confounders C]
//   codeown npsk     scores.csv [-o ranks.csv]
//   codeown version
//
// Exit codes: 0 success, 2 usage/config error, 3 VCS error.

#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codeown/commands.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitVcs = 3;

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::optional<double> threshold;
  std::string extensions;
  std::string repo;
  std::vector<std::string> windows;
  std::string alias_map;
  std::string labels;
  std::string confounders;
  std::optional<unsigned> threads;
};

codeown::RunConfig make_config(const Flags& f) {
  codeown::RunConfig c;
  if (!f.config_path.empty()) c = codeown::load_config(f.config_path);
  if (!f.repo.empty()) c.repo_path = f.repo;
  if (!f.out_dir.empty()) c.output_dir = f.out_dir;
  if (f.threshold) c.expertise_threshold = *f.threshold;
  if (!f.extensions.empty()) c.extensions = codeown::split_extensions(f.extensions);
  if (!f.windows.empty()) {
    c.windows.clear();
    for (const auto& w : f.windows) c.windows.push_back(codeown::parse_window_spec(w));
  }
  if (!f.alias_map.empty()) c.alias_map_path = f.alias_map;
  if (!f.labels.empty()) c.labels_path = f.labels;
  if (!f.confounders.empty()) c.confounders_path = f.confounders;
  if (f.threads) c.threads = *f.threads;
  return c;
}

void report(const codeown::Diagnostics& diag) {
  for (const auto& m : diag.messages) std::cerr << "warning: " << m << "\n";
}

void list_outputs(const std::vector<codeown::fs::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commit-based and line-based code ownership for release windows"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_path, "Key/value config file");
  app.add_option("--out-dir", flags.out_dir, "Directory for snapshots and reports");
  app.add_option("--threshold", flags.threshold, "Expertise threshold; above it a developer is major (default 0.05)");
  app.add_option("--extensions", flags.extensions, "Comma-separated file extensions (default .java)");

  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--repo", flags.repo, "Repository path");
    sub->add_option("--window", flags.windows, "Release window [name=][predecessor..]release (repeatable)");
    sub->add_option("--threads", flags.threads, "Concurrent blame processes (default: hardware, max 8)");
  };

  auto* mine = app.add_subcommand("mine", "Mine commit and blame evidence into snapshot JSON files");
  add_run_options(mine);
  mine->add_option("--alias-map", flags.alias_map, "CSV of raw_key,canonical_key developer aliases");

  auto* analyze = app.add_subcommand("analyze", "Ownership, divergence CSVs and release summaries");
  add_run_options(analyze);

  auto* features = app.add_subcommand("features", "Per-file feature CSV for defect models");
  add_run_options(features);
  features->add_option("--labels", flags.labels, "CSV of path,defective (optional release column)");
  features->add_option("--confounders", flags.confounders, "CSV keyed by path; other columns pass through");

  std::string npsk_input;
  std::string npsk_output;
  auto* npsk = app.add_subcommand("npsk", "Non-parametric ScottKnott ESD ranking of (group_id, value) rows");
  npsk->add_option("input", npsk_input, "Input CSV, '-' for stdin")->required();
  npsk->add_option("-o,--output", npsk_output, "Output CSV (default stdout)");

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  codeown::Diagnostics diag;
  try {
    if (app.got_subcommand("version")) {
      std::cout << "codeown " << codeown::kVersion << "\n";
    } else if (app.got_subcommand("npsk")) {
      std::string input = npsk_input == "-"
                              ? std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>())
                              : codeown::read_file(npsk_input);
      auto out = codeown::cmd_npsk(input);
      if (npsk_output.empty())
        std::cout << out;
      else
        codeown::write_file_atomic(npsk_output, out);
    } else {
      auto config = make_config(flags);
      if (app.got_subcommand("mine")) {
        if (config.repo_path.empty()) throw codeown::ConfigError("no repository given (--repo or config 'repo')");
        list_outputs(codeown::cmd_mine(config, &diag));
      } else if (app.got_subcommand("analyze")) {
        list_outputs(codeown::cmd_analyze(config, &diag));
      } else if (app.got_subcommand("features")) {
        list_outputs(codeown::cmd_features(config, &diag));
      }
    }
  } catch (const codeown::VcsError& e) {
    report(diag);
    std::cerr << "error: " << e.what() << "\n";
    return kExitVcs;
  } catch (const codeown::Error& e) {
    report(diag);
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    report(diag);
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  report(diag);
  return 0;
}
