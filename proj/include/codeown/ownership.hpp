#pragma once

// Commit-based and line-based code ownership.
//
//   own_commit(d, f) = commits by d touching f in the window / commits touching f
//   own_line(d, f)   = lines of f at the release ref last changed by d / lines of f
//
// A developer missing from one source gets no value for that approach (not 0),
// so the per-approach values of a file always form a probability vector.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "codeown/error.hpp"
#include "codeown/miner.hpp"

namespace codeown {

inline constexpr double kDefaultExpertiseThreshold = 0.05;

enum class Approach { Commit, Line };

struct OwnershipValue {
  Approach approach;
  double value;  // in [0, 1]
};

enum class ExpertiseLevel { Major, Minor };

inline std::string_view to_string(ExpertiseLevel level) {
  return level == ExpertiseLevel::Major ? "major" : "minor";
}

struct DeveloperOwnership {
  std::uint64_t commit_count = 0;
  std::uint64_t line_count = 0;
  std::optional<OwnershipValue> own_commit;
  std::optional<OwnershipValue> own_line;
  std::optional<ExpertiseLevel> level_commit;
  std::optional<ExpertiseLevel> level_line;
};

struct FileOwnershipProfile {
  std::string path;
  std::uint64_t total_commits = 0;
  std::uint64_t total_lines = 0;
  std::map<std::string, DeveloperOwnership> per_developer;

  // D_C: developers with at least one window commit on this file.
  std::set<std::string> commit_developers() const {
    std::set<std::string> out;
    for (const auto& [key, d] : per_developer)
      if (d.own_commit) out.insert(key);
    return out;
  }
  // D_L: developers owning at least one line at the release ref.
  std::set<std::string> line_developers() const {
    std::set<std::string> out;
    for (const auto& [key, d] : per_developer)
      if (d.own_line) out.insert(key);
    return out;
  }
};

struct OwnershipMetrics {
  std::string path;
  double own_commit = 0.0;
  double own_line = 0.0;
  std::uint64_t major_commit = 0;
  std::uint64_t minor_commit = 0;
  std::uint64_t major_line = 0;
  std::uint64_t minor_line = 0;
};

// Per-file commit evidence from the non-merge commits of a snapshot.
struct FileCommitStats {
  std::map<std::string, std::uint64_t> commits_by_developer;
  std::uint64_t total_commits = 0;
  std::uint64_t lines_added = 0;
  std::uint64_t lines_deleted = 0;
};

class CommitIndex {
 public:
  explicit CommitIndex(const ReleaseSnapshot& snapshot) {
    for (const auto& c : snapshot.commits) {
      if (c.is_merge) continue;
      std::set<std::string_view> touched;
      for (const auto& fc : c.file_changes) {
        auto& stats = by_path_[fc.path];
        stats.lines_added += fc.lines_added;
        stats.lines_deleted += fc.lines_deleted;
        if (touched.insert(fc.path).second) {
          ++stats.total_commits;
          ++stats.commits_by_developer[c.author.key];
        }
      }
    }
  }

  const FileCommitStats* find(const std::string& path) const {
    auto it = by_path_.find(path);
    return it == by_path_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, FileCommitStats> by_path_;
};

inline std::optional<double> own_commit(const std::string& developer_key, const std::string& path,
                                        const ReleaseSnapshot& snapshot) {
  CommitIndex index(snapshot);
  const auto* stats = index.find(path);
  if (!stats || stats->total_commits == 0) return std::nullopt;
  auto it = stats->commits_by_developer.find(developer_key);
  if (it == stats->commits_by_developer.end()) return std::nullopt;
  return static_cast<double>(it->second) / static_cast<double>(stats->total_commits);
}

inline std::optional<double> own_line(const std::string& developer_key, const std::string& path,
                                      const ReleaseSnapshot& snapshot) {
  auto f = snapshot.file_authorship.find(path);
  if (f == snapshot.file_authorship.end() || f->second.total_lines == 0) return std::nullopt;
  auto it = f->second.author_line_counts.find(developer_key);
  if (it == f->second.author_line_counts.end() || it->second == 0) return std::nullopt;
  return static_cast<double>(it->second) / static_cast<double>(f->second.total_lines);
}

// Major iff value is strictly above the threshold.
inline ExpertiseLevel classify_expertise(double value, double threshold = kDefaultExpertiseThreshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError("expertise threshold must lie in (0, 1), got " + std::to_string(threshold));
  return value > threshold ? ExpertiseLevel::Major : ExpertiseLevel::Minor;
}

inline FileOwnershipProfile build_profile(const std::string& path, const ReleaseSnapshot& snapshot,
                                          const CommitIndex& index,
                                          double threshold = kDefaultExpertiseThreshold) {
  const auto* stats = index.find(path);
  auto lines = snapshot.file_authorship.find(path);
  if (!stats && lines == snapshot.file_authorship.end())
    throw NotFoundError("file not in snapshot: " + path);

  FileOwnershipProfile p;
  p.path = path;
  if (stats) {
    p.total_commits = stats->total_commits;
    for (const auto& [key, n] : stats->commits_by_developer) {
      auto& d = p.per_developer[key];
      d.commit_count = n;
      double v = static_cast<double>(n) / static_cast<double>(stats->total_commits);
      d.own_commit = OwnershipValue{Approach::Commit, v};
      d.level_commit = classify_expertise(v, threshold);
    }
  }
  if (lines != snapshot.file_authorship.end()) {
    p.total_lines = lines->second.total_lines;
    for (const auto& [key, n] : lines->second.author_line_counts) {
      if (n == 0) continue;
      auto& d = p.per_developer[key];
      d.line_count = n;
      double v = static_cast<double>(n) / static_cast<double>(p.total_lines);
      d.own_line = OwnershipValue{Approach::Line, v};
      d.level_line = classify_expertise(v, threshold);
    }
  }
  classify_expertise(0.0, threshold);  // validates the threshold for empty profiles too
  return p;
}

inline FileOwnershipProfile build_profile(const std::string& path, const ReleaseSnapshot& snapshot,
                                          double threshold = kDefaultExpertiseThreshold) {
  return build_profile(path, snapshot, CommitIndex(snapshot), threshold);
}

// One profile per file present at the release ref, sorted by path.
inline std::vector<FileOwnershipProfile> build_profiles(const ReleaseSnapshot& snapshot,
                                                        double threshold = kDefaultExpertiseThreshold) {
  CommitIndex index(snapshot);
  std::vector<FileOwnershipProfile> out;
  out.reserve(snapshot.file_authorship.size());
  for (const auto& [path, la] : snapshot.file_authorship) out.push_back(build_profile(path, snapshot, index, threshold));
  return out;
}

// File-level metrics. OWN_* is the top contributor's share under each approach.
inline OwnershipMetrics file_metrics(const FileOwnershipProfile& profile) {
  OwnershipMetrics m;
  m.path = profile.path;
  for (const auto& [key, d] : profile.per_developer) {
    if (d.own_commit) {
      m.own_commit = std::max(m.own_commit, d.own_commit->value);
      (*d.level_commit == ExpertiseLevel::Major ? m.major_commit : m.minor_commit)++;
    }
    if (d.own_line) {
      m.own_line = std::max(m.own_line, d.own_line->value);
      (*d.level_line == ExpertiseLevel::Major ? m.major_line : m.minor_line)++;
    }
  }
  return m;
}

}  // namespace codeown
