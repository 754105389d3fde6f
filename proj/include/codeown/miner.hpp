#pragma once

// Release-scoped mining: commits in a release window and line authorship at
// the release ref, both obtained by running git and parsing its output.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "codeown/error.hpp"
#include "codeown/git_parse.hpp"
#include "codeown/identity.hpp"
#include "codeown/io.hpp"
#include "codeown/process.hpp"

namespace codeown {

struct ReleaseWindow {
  std::string release_ref;
  std::string predecessor_ref;  // empty: everything reachable from release_ref
  std::string release_name;

  friend bool operator==(const ReleaseWindow&, const ReleaseWindow&) = default;
};

struct FileChange {
  std::string path;
  std::uint64_t lines_added = 0;
  std::uint64_t lines_deleted = 0;
  bool binary = false;

  friend bool operator==(const FileChange&, const FileChange&) = default;
};

struct CommitRecord {
  std::string hash;
  DeveloperIdentity author;
  std::int64_t timestamp = 0;
  bool is_merge = false;
  std::vector<FileChange> file_changes;

  friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

struct LineAuthorship {
  std::string path;
  std::map<std::string, std::uint64_t> author_line_counts;  // developer key -> lines
  std::uint64_t total_lines = 0;

  friend bool operator==(const LineAuthorship&, const LineAuthorship&) = default;
};

struct MinerConfig {
  std::vector<std::string> extensions{".java"};
  AliasMap aliases;
  unsigned threads = 0;  // 0: hardware concurrency, capped at 8
};

struct ReleaseSnapshot {
  ReleaseWindow window;
  std::string release_commit;      // resolved object id of release_ref
  std::string predecessor_commit;  // empty when predecessor_ref is
  std::vector<CommitRecord> commits;
  std::map<std::string, LineAuthorship> file_authorship;
  std::vector<std::string> file_filter;
  std::map<std::string, std::string> alias_entries;

  friend bool operator==(const ReleaseSnapshot&, const ReleaseSnapshot&) = default;
};

inline bool matches_filter(const std::string& path, const std::vector<std::string>& extensions) {
  return std::any_of(extensions.begin(), extensions.end(),
                     [&](const std::string& ext) { return path.ends_with(ext); });
}

namespace detail {

inline std::string run_git(const fs::path& repo, std::vector<std::string> args) {
  std::vector<std::string> argv{"git", "-C", repo.string(), "-c", "core.quotePath=true",
                                "-c", "color.ui=never"};
  argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
  auto r = run_process(argv);
  if (r.exit_code != 0) {
    std::string cmd;
    for (std::size_t i = 7; i < argv.size(); ++i) cmd += (i > 7 ? " " : "") + argv[i];
    auto err = r.err;
    while (!err.empty() && (err.back() == '\n' || err.back() == '\r')) err.pop_back();
    throw VcsError("git " + cmd + " failed (exit " + std::to_string(r.exit_code) + "): " + err);
  }
  return r.out;
}

inline std::string trim_newline(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace detail

inline void check_repository(const fs::path& repo) {
  std::error_code ec;
  if (!fs::is_directory(repo, ec)) throw VcsError("cannot read repository: " + repo.string());
  auto r = run_process({"git", "-C", repo.string(), "rev-parse", "--git-dir"});
  if (r.exit_code != 0) throw VcsError("not a git repository: " + repo.string());
}

// Resolves a tag, branch or object id to a commit id. ConfigError if it does not.
inline std::string resolve_commit(const fs::path& repo, const std::string& ref) {
  if (ref.empty()) throw ConfigError("empty ref");
  auto r = run_process({"git", "-C", repo.string(), "rev-parse", "--verify", "--quiet", "--end-of-options",
                        ref + "^{commit}"});
  if (r.exit_code != 0) throw ConfigError("cannot resolve ref '" + ref + "' to a commit");
  return detail::trim_newline(r.out);
}

// Commits reachable from release_ref and not from predecessor_ref, oldest
// first in topological order. Merge commits are kept (is_merge = true) with
// their diff against the first parent.
inline std::vector<CommitRecord> enumerate_release_commits(const fs::path& repo, const ReleaseWindow& window,
                                                           const AliasMap& aliases = {},
                                                           Diagnostics* diag = nullptr) {
  check_repository(repo);
  auto release = resolve_commit(repo, window.release_ref);
  std::vector<std::string> args{"log",         "--no-color",   "--no-renames",
                                "--no-ext-diff", "--no-textconv", "--topo-order",
                                "--reverse",   "--diff-merges=first-parent", "--numstat",
                                "--format=" + std::string(gitparse::kLogFormat), release};
  if (!window.predecessor_ref.empty()) args.push_back("^" + resolve_commit(repo, window.predecessor_ref));
  args.push_back("--");

  auto raw = gitparse::parse_log(detail::run_git(repo, std::move(args)));
  std::vector<CommitRecord> commits;
  commits.reserve(raw.size());
  std::set<std::string> seen;
  for (auto& rc : raw) {
    if (!seen.insert(rc.hash).second) throw VcsError("log: duplicate commit " + rc.hash);
    CommitRecord c;
    try {
      c.author = resolve_identity(rc.author_name, rc.author_email, aliases, "commit " + rc.hash);
    } catch (const ConfigError& e) {
      if (diag) diag->note(std::string("skipping commit: ") + e.what());
      continue;
    }
    c.hash = std::move(rc.hash);
    c.timestamp = rc.timestamp;
    c.is_merge = rc.parents.size() > 1;
    for (auto& ch : rc.changes)
      c.file_changes.push_back(FileChange{std::move(ch.path), ch.added, ch.deleted, ch.binary});
    commits.push_back(std::move(c));
  }
  return commits;
}

namespace detail {

inline std::string empty_tree_id(const fs::path& repo) {
  return trim_newline(run_git(repo, {"hash-object", "-t", "tree", "--stdin"}));
}

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

}  // namespace detail

// Line authorship for every filtered text file at release_ref. Binary files
// are skipped with a diagnostic.
inline std::map<std::string, LineAuthorship> blame_release_files(const fs::path& repo,
                                                                 const std::string& release_ref,
                                                                 const std::vector<std::string>& filter,
                                                                 const AliasMap& aliases = {},
                                                                 Diagnostics* diag = nullptr,
                                                                 unsigned threads = 0) {
  if (filter.empty()) throw ConfigError("extension filter is empty");
  check_repository(repo);
  auto release = resolve_commit(repo, release_ref);

  // Diffing the release tree against the empty tree lists every file with its
  // line count, and marks binary files with "-".
  auto listing = detail::run_git(repo, {"diff-tree", "-r", "--no-renames", "--no-ext-diff", "--no-textconv",
                                        "--numstat", detail::empty_tree_id(repo), release});
  struct Job {
    std::string path;
    std::uint64_t expected_lines;
  };
  std::vector<Job> jobs;
  std::size_t pos = 0;
  while (pos < listing.size()) {
    auto nl = listing.find('\n', pos);
    std::string_view line(listing.data() + pos, (nl == std::string::npos ? listing.size() : nl) - pos);
    pos = nl == std::string::npos ? listing.size() : nl + 1;
    if (line.empty()) continue;
    auto entry = gitparse::parse_numstat_line(line);
    if (!matches_filter(entry.path, filter)) continue;
    if (entry.binary) {
      if (diag) diag->note("skipping binary file: " + entry.path);
      continue;
    }
    jobs.push_back({std::move(entry.path), entry.added});
  }

  std::vector<LineAuthorship> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        auto out = detail::run_git(repo, {"blame", "--line-porcelain", release, "--", jobs[i].path});
        auto counts = gitparse::parse_line_porcelain(out);
        LineAuthorship la;
        la.path = jobs[i].path;
        la.total_lines = counts.total_lines;
        for (const auto& [who, n] : counts.by_author) {
          auto id = resolve_identity(who.first, who.second, aliases, "blame of " + jobs[i].path);
          la.author_line_counts[id.key] += n;
        }
        if (la.total_lines != jobs[i].expected_lines)
          throw VcsError("blame of " + jobs[i].path + " reports " + std::to_string(la.total_lines) +
                         " lines, file has " + std::to_string(jobs[i].expected_lines));
        results[i] = std::move(la);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
        return;
      }
    }
  };
  unsigned n_workers = detail::worker_count(threads, jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const ConfigError& e) {
      throw VcsError(e.what());
    }
  }

  std::map<std::string, LineAuthorship> by_path;
  for (auto& la : results) {
    auto path = la.path;
    by_path.emplace(std::move(path), std::move(la));
  }
  return by_path;
}

inline ReleaseSnapshot build_snapshot(const fs::path& repo, const ReleaseWindow& window, const MinerConfig& config,
                                      Diagnostics* diag = nullptr) {
  if (config.extensions.empty()) throw ConfigError("extension filter is empty");
  ReleaseSnapshot snap;
  snap.window = window;
  if (snap.window.release_name.empty()) snap.window.release_name = window.release_ref;
  check_repository(repo);
  snap.release_commit = resolve_commit(repo, window.release_ref);
  if (!window.predecessor_ref.empty()) snap.predecessor_commit = resolve_commit(repo, window.predecessor_ref);
  snap.file_filter = config.extensions;
  snap.alias_entries = config.aliases.entries();

  snap.commits = enumerate_release_commits(repo, window, config.aliases, diag);
  for (auto& c : snap.commits) {
    std::erase_if(c.file_changes, [&](const FileChange& fc) { return !matches_filter(fc.path, config.extensions); });
  }
  snap.file_authorship =
      blame_release_files(repo, snap.release_commit, config.extensions, config.aliases, diag, config.threads);
  return snap;
}

}  // namespace codeown
