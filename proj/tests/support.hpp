#pragma once

// Shared test helpers.

#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "codeown/io.hpp"
#include "codeown/miner.hpp"
#include "codeown/process.hpp"

namespace codeown::testing {

inline fs::path scratch_root() {
  struct Root {
    fs::path path;
    Root() : path(fs::temp_directory_path() / ("codeown-tests-" + std::to_string(::getpid()))) {
      fs::create_directories(path);
    }
    ~Root() {
      std::error_code ec;
      fs::remove_all(path, ec);
    }
  };
  static const Root root;
  return root.path;
}

inline fs::path fresh_dir(const std::string& name) {
  static std::mutex m;
  static int counter = 0;
  std::lock_guard lock(m);
  auto p = scratch_root() / (name + "-" + std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

// Builds (once per process) the named scenario repository.
inline fs::path fixture_repo(const std::string& scenario) {
  static std::mutex m;
  static std::map<std::string, fs::path> built;
  std::lock_guard lock(m);
  if (auto it = built.find(scenario); it != built.end()) return it->second;
  auto dir = scratch_root() / ("repo-" + scenario);
  auto r = run_process({"bash", CODEOWN_FIXTURE_SCRIPT, dir.string(), scenario});
  if (r.exit_code != 0) throw std::runtime_error("fixture " + scenario + " failed: " + r.err);
  built[scenario] = dir;
  return dir;
}

inline ProcessResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), CODEOWN_CLI);
  return run_process(args);
}

inline ReleaseWindow window(std::string pred, std::string rel, std::string name = {}) {
  if (name.empty()) name = rel;
  return ReleaseWindow{std::move(rel), std::move(pred), std::move(name)};
}

// A random snapshot with occasional merges. Files may lack window commits,
// be empty, or be missing at the release.
inline ReleaseSnapshot random_snapshot(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int n_devs = pick(1, 8);
  int n_files = pick(1, 6);
  std::vector<std::string> devs, files;
  for (int d = 0; d < n_devs; ++d) devs.push_back("dev" + std::to_string(d) + "@example.com");
  for (int f = 0; f < n_files; ++f) files.push_back("src/F" + std::to_string(f) + ".java");

  ReleaseSnapshot s;
  s.window = {"r2", "r1", "r2"};
  s.file_filter = {".java"};
  int n_commits = pick(0, 25);
  for (int c = 0; c < n_commits; ++c) {
    CommitRecord rec;
    rec.hash = "c" + std::to_string(c);
    const auto& dev = devs[pick(0, n_devs - 1)];
    rec.author = {dev, dev, dev};
    rec.timestamp = 1000 + c;
    rec.is_merge = pick(0, 9) == 0;
    for (const auto& f : files)
      if (pick(0, 2) == 0)
        rec.file_changes.push_back({f, static_cast<std::uint64_t>(pick(0, 30)), static_cast<std::uint64_t>(pick(0, 10)), false});
    s.commits.push_back(std::move(rec));
  }
  for (int f = 0; f < n_files; ++f) {
    if (pick(0, 5) == 0) continue;  // deleted before the release
    LineAuthorship la;
    la.path = files[f];
    if (pick(0, 6) != 0) {
      for (const auto& dev : devs) {
        if (pick(0, 2) == 0) continue;
        auto n = static_cast<std::uint64_t>(pick(1, 200));
        la.author_line_counts[dev] = n;
        la.total_lines += n;
      }
    }
    s.file_authorship[la.path] = std::move(la);
  }
  return s;
}

}  // namespace codeown::testing
