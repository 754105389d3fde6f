#pragma once

// Snapshot JSON schema (keys sorted lexicographically, counts as integers):
//
// {
//   "commits": [ { "author": {"email", "key", "name"},
//                  "file_changes": [ {"added", "binary", "deleted", "path"} ],
//                  "hash", "is_merge", "timestamp" } ],
//   "config": { "alias_map": {raw: canonical}, "extensions": [...] },
//   "file_authorship": { path: { "author_line_counts": {key: lines},
//                                "total_lines" } },
//   "window": { "predecessor_commit", "predecessor_ref", "release_commit",
//               "release_name", "release_ref" }
// }

#include <string>

#include <json.hpp>

#include "codeown/error.hpp"
#include "codeown/io.hpp"
#include "codeown/miner.hpp"

namespace codeown {

using json = nlohmann::json;

inline json snapshot_to_json(const ReleaseSnapshot& s) {
  json commits = json::array();
  for (const auto& c : s.commits) {
    json changes = json::array();
    for (const auto& fc : c.file_changes)
      changes.push_back({{"path", fc.path}, {"added", fc.lines_added}, {"deleted", fc.lines_deleted},
                         {"binary", fc.binary}});
    commits.push_back({{"hash", c.hash},
                       {"author", {{"key", c.author.key}, {"name", c.author.display_name}, {"email", c.author.email}}},
                       {"timestamp", c.timestamp},
                       {"is_merge", c.is_merge},
                       {"file_changes", std::move(changes)}});
  }
  json files = json::object();
  for (const auto& [path, la] : s.file_authorship) {
    json counts = json::object();
    for (const auto& [key, n] : la.author_line_counts) counts[key] = n;
    files[path] = {{"author_line_counts", std::move(counts)}, {"total_lines", la.total_lines}};
  }
  json aliases = json::object();
  for (const auto& [from, to] : s.alias_entries) aliases[from] = to;
  return {{"window",
           {{"release_ref", s.window.release_ref},
            {"predecessor_ref", s.window.predecessor_ref},
            {"release_name", s.window.release_name},
            {"release_commit", s.release_commit},
            {"predecessor_commit", s.predecessor_commit}}},
          {"commits", std::move(commits)},
          {"file_authorship", std::move(files)},
          {"config", {{"extensions", s.file_filter}, {"alias_map", std::move(aliases)}}}};
}

inline std::string serialize_snapshot(const ReleaseSnapshot& s) { return snapshot_to_json(s).dump(2) + "\n"; }

inline ReleaseSnapshot snapshot_from_json(const json& j) {
  try {
    ReleaseSnapshot s;
    const auto& w = j.at("window");
    s.window.release_ref = w.at("release_ref").get<std::string>();
    s.window.predecessor_ref = w.at("predecessor_ref").get<std::string>();
    s.window.release_name = w.at("release_name").get<std::string>();
    s.release_commit = w.at("release_commit").get<std::string>();
    s.predecessor_commit = w.at("predecessor_commit").get<std::string>();
    for (const auto& jc : j.at("commits")) {
      CommitRecord c;
      c.hash = jc.at("hash").get<std::string>();
      const auto& a = jc.at("author");
      c.author = {a.at("key").get<std::string>(), a.at("name").get<std::string>(), a.at("email").get<std::string>()};
      if (c.author.key.empty()) throw ConfigError("snapshot: empty developer key in commit " + c.hash);
      c.timestamp = jc.at("timestamp").get<std::int64_t>();
      c.is_merge = jc.at("is_merge").get<bool>();
      for (const auto& jf : jc.at("file_changes"))
        c.file_changes.push_back({jf.at("path").get<std::string>(), jf.at("added").get<std::uint64_t>(),
                                  jf.at("deleted").get<std::uint64_t>(), jf.at("binary").get<bool>()});
      s.commits.push_back(std::move(c));
    }
    for (const auto& [path, jf] : j.at("file_authorship").items()) {
      LineAuthorship la;
      la.path = path;
      la.total_lines = jf.at("total_lines").get<std::uint64_t>();
      std::uint64_t sum = 0;
      for (const auto& [key, n] : jf.at("author_line_counts").items()) {
        la.author_line_counts[key] = n.get<std::uint64_t>();
        sum += la.author_line_counts[key];
      }
      if (sum != la.total_lines) throw ConfigError("snapshot: line counts of " + path + " do not add up");
      s.file_authorship.emplace(path, std::move(la));
    }
    s.file_filter = j.at("config").at("extensions").get<std::vector<std::string>>();
    for (const auto& [from, to] : j.at("config").at("alias_map").items()) s.alias_entries[from] = to.get<std::string>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("snapshot: schema violation: ") + e.what());
  }
}

inline ReleaseSnapshot parse_snapshot(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("snapshot: invalid JSON: ") + e.what());
  }
  return snapshot_from_json(j);
}

inline ReleaseSnapshot load_snapshot(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw ConfigError("missing snapshot: " + path.string());
  return parse_snapshot(read_file(path));
}

inline void save_snapshot(const fs::path& path, const ReleaseSnapshot& s) {
  write_file_atomic(path, serialize_snapshot(s));
}

}  // namespace codeown
