#pragma once

// Output tables and the release summary.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "codeown/csv.hpp"
#include "codeown/divergence.hpp"
#include "codeown/ownership.hpp"
#include "codeown/stats.hpp"

namespace codeown {

inline const csv::Row kOwnershipHeader{"path",        "developer_key", "commit_count", "line_count",
                                       "own_commit",  "own_line",      "level_commit", "level_line"};

inline const csv::Row kDivergenceHeader{"path",   "n_common",    "n_commit_only", "n_line_only",          "common",
                                        "commit_only", "line_only", "rho",         "expertise_consistency"};

inline const csv::Row kFeatureColumns{"release",    "path",         "OWN_COMMIT", "OWN_LINE",  "MAJOR_COMMIT",
                                      "MINOR_COMMIT", "MAJOR_LINE", "MINOR_LINE", "COMMITS",   "ADDED_LINES",
                                      "DEL_LINES",  "NDEV",         "LOC"};

inline csv::Table ownership_table(const std::vector<FileOwnershipProfile>& profiles) {
  csv::Table t{kOwnershipHeader, {}};
  for (const auto& p : profiles) {
    for (const auto& [key, d] : p.per_developer) {
      t.rows.push_back({p.path, key, std::to_string(d.commit_count), std::to_string(d.line_count),
                        d.own_commit ? csv::format_ratio(d.own_commit->value) : "",
                        d.own_line ? csv::format_ratio(d.own_line->value) : "",
                        d.level_commit ? std::string(to_string(*d.level_commit)) : "",
                        d.level_line ? std::string(to_string(*d.level_line)) : ""});
    }
  }
  return t;
}

inline csv::Table divergence_table(const ReleaseDivergence& rep) {
  csv::Table t{kDivergenceHeader, {}};
  for (const auto& r : rep.records) {
    t.rows.push_back({r.path, std::to_string(r.overlap.n_common), std::to_string(r.overlap.n_commit_only),
                      std::to_string(r.overlap.n_line_only), csv::format_ratio(r.overlap.common),
                      csv::format_ratio(r.overlap.commit_only), csv::format_ratio(r.overlap.line_only),
                      csv::format_ratio(r.rho), csv::format_ratio(r.expertise_consistency)});
  }
  return t;
}

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline constexpr double kSignificanceLevel = 0.05;

inline nlohmann::json summary_json(const ReleaseDivergence& rep, double threshold,
                                   const std::vector<std::string>& diagnostics = {}) {
  nlohmann::json j;
  j["release_name"] = rep.release_name;
  j["expertise_threshold"] = threshold;
  j["n_files"] = rep.n_files;
  j["n_records"] = rep.records.size();
  j["n_skipped"] = rep.n_skipped;
  j["n_rho_excluded"] = rep.n_rho_excluded;
  j["median_common"] = optional_number(rep.median_common);
  j["median_commit_only"] = optional_number(rep.median_commit_only);
  j["median_line_only"] = optional_number(rep.median_line_only);
  j["median_rho"] = optional_number(rep.median_rho);
  j["median_rho_magnitude"] =
      rep.median_rho_strength ? nlohmann::json(std::string(stats::to_string(*rep.median_rho_strength))) : nullptr;
  j["median_expertise_consistency"] = optional_number(rep.median_expertise_consistency);
  if (rep.exclusive) {
    const auto& e = *rep.exclusive;
    j["exclusive_comparison"] = {
        {"n_commit_only", e.commit_only_values.size()},
        {"n_line_only", e.line_only_values.size()},
        {"median_commit_only_value", stats::median(e.commit_only_values)},
        {"median_line_only_value", stats::median(e.line_only_values)},
        {"p_value", e.p_value},
        {"significant", e.p_value < kSignificanceLevel},
        {"delta", e.delta},
        {"magnitude", std::string(stats::to_string(e.magnitude))},
        {"major_fraction_commit_only", e.major_fraction_commit_only},
        {"major_fraction_line_only", e.major_fraction_line_only}};
  } else {
    j["exclusive_comparison"] = nullptr;
  }
  j["diagnostics"] = diagnostics;
  return j;
}

// ---------------------------------------------------------------------------
// Features

struct FeatureVector {
  std::string release_name;
  std::string path;
  OwnershipMetrics ownership;
  std::uint64_t commits = 0;
  std::uint64_t added_lines = 0;
  std::uint64_t deleted_lines = 0;
  std::uint64_t ndev = 0;  // |D_C ∪ D_L|
  std::uint64_t loc = 0;
  std::vector<std::string> extra;  // pass-through confounder values
  std::optional<int> defective;
};

inline std::vector<FeatureVector> feature_vectors(const ReleaseSnapshot& snapshot, double threshold) {
  CommitIndex index(snapshot);
  std::vector<FeatureVector> out;
  for (const auto& [path, la] : snapshot.file_authorship) {
    auto profile = build_profile(path, snapshot, index, threshold);
    FeatureVector f;
    f.release_name = snapshot.window.release_name;
    f.path = path;
    f.ownership = file_metrics(profile);
    if (const auto* s = index.find(path)) {
      f.commits = s->total_commits;
      f.added_lines = s->lines_added;
      f.deleted_lines = s->lines_deleted;
    }
    f.ndev = profile.per_developer.size();
    f.loc = profile.total_lines;
    out.push_back(std::move(f));
  }
  return out;
}

// Rows keyed by path, optionally scoped by a "release" column. Lookups for a
// release fall back to unscoped rows.
class KeyedTable {
 public:
  KeyedTable() = default;

  KeyedTable(const csv::Table& table, std::string_view what) : what_(what) {
    auto path_col = table.column("path");
    if (!path_col) throw ConfigError(std::string(what) + ": missing 'path' column");
    auto release_col = table.column("release");
    for (std::size_t i = 0; i < table.header.size(); ++i)
      if (i != *path_col && (!release_col || i != *release_col)) {
        value_columns_.push_back(i);
        names_.push_back(table.header[i]);
      }
    for (const auto& row : table.rows) {
      std::string release = release_col ? row[*release_col] : std::string{};
      std::vector<std::string> values;
      for (auto i : value_columns_) values.push_back(row[i]);
      if (!rows_[release].emplace(row[*path_col], std::move(values)).second)
        throw ConfigError(std::string(what) + ": duplicate path '" + row[*path_col] + "'" +
                          (release.empty() ? "" : " in release '" + release + "'"));
    }
  }

  const std::vector<std::string>& column_names() const { return names_; }

  const std::vector<std::string>* find(const std::string& release, const std::string& path) const {
    for (const auto& scope : {release, std::string{}}) {
      auto r = rows_.find(scope);
      if (r == rows_.end()) continue;
      auto it = r->second.find(path);
      if (it != r->second.end()) return &it->second;
    }
    return nullptr;
  }

  // Paths listed for this release (scoped or unscoped).
  std::set<std::string> paths_for(const std::string& release) const {
    std::set<std::string> out;
    for (const auto& scope : {release, std::string{}}) {
      auto r = rows_.find(scope);
      if (r == rows_.end()) continue;
      for (const auto& [path, v] : r->second) out.insert(path);
    }
    return out;
  }

  bool empty() const { return rows_.empty() && names_.empty(); }

 private:
  std::string what_;
  std::vector<std::size_t> value_columns_;
  std::vector<std::string> names_;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> rows_;
};

inline KeyedTable load_labels(const csv::Table& table) {
  KeyedTable labels(table, "labels");
  if (labels.column_names() != std::vector<std::string>{"defective"})
    throw ConfigError("labels: expected columns path, defective (and optionally release)");
  return labels;
}

inline KeyedTable load_confounders(const csv::Table& table) {
  KeyedTable extra(table, "confounders");
  std::set<std::string> reserved(kFeatureColumns.begin(), kFeatureColumns.end());
  reserved.insert("defective");
  for (const auto& name : extra.column_names())
    if (reserved.count(name)) throw ConfigError("confounders: column '" + name + "' clashes with a native column");
  return extra;
}

inline csv::Table features_table(std::vector<FeatureVector> rows, const ReleaseSnapshot& snapshot,
                                 const KeyedTable* labels, const KeyedTable* confounders,
                                 Diagnostics* diag = nullptr) {
  const auto& release = snapshot.window.release_name;
  csv::Table t{kFeatureColumns, {}};
  if (confounders)
    for (const auto& name : confounders->column_names()) t.header.push_back(name);
  if (labels) {
    t.header.push_back("defective");
    for (const auto& path : labels->paths_for(release))
      if (!snapshot.file_authorship.count(path) && diag)
        diag->note("labels: path '" + path + "' not present at release " + release);
  }

  for (auto& f : rows) {
    const auto& m = f.ownership;
    csv::Row row{f.release_name,
                 f.path,
                 csv::format_ratio(m.own_commit),
                 csv::format_ratio(m.own_line),
                 std::to_string(m.major_commit),
                 std::to_string(m.minor_commit),
                 std::to_string(m.major_line),
                 std::to_string(m.minor_line),
                 std::to_string(f.commits),
                 std::to_string(f.added_lines),
                 std::to_string(f.deleted_lines),
                 std::to_string(f.ndev),
                 std::to_string(f.loc)};
    if (confounders) {
      const auto* values = confounders->find(release, f.path);
      for (std::size_t i = 0; i < confounders->column_names().size(); ++i)
        row.push_back(values ? (*values)[i] : std::string{});
    }
    if (labels) {
      const auto* values = labels->find(release, f.path);
      if (values) {
        const auto& v = (*values)[0];
        if (v != "0" && v != "1") throw ConfigError("labels: defective must be 0 or 1, got '" + v + "'");
        f.defective = v == "1";
      }
      row.push_back(f.defective ? std::to_string(*f.defective) : std::string{});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace codeown
