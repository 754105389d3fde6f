#pragma once

// The work behind each CLI subcommand. Every output is written atomically.

#include <string>
#include <vector>

#include "codeown/config.hpp"
#include "codeown/csv.hpp"
#include "codeown/divergence.hpp"
#include "codeown/identity.hpp"
#include "codeown/io.hpp"
#include "codeown/miner.hpp"
#include "codeown/ownership.hpp"
#include "codeown/report.hpp"
#include "codeown/snapshot.hpp"
#include "codeown/stats.hpp"

namespace codeown {

inline constexpr std::string_view kVersion = "0.3.0";

struct OutputPaths {
  fs::path snapshot, ownership, divergence, summary, features;
};

inline OutputPaths output_paths(const RunConfig& config, const ReleaseWindow& window) {
  auto stem = file_stem(window.release_name);
  auto dir = config.output_dir;
  return {dir / (stem + ".snapshot.json"), dir / (stem + ".ownership.csv"), dir / (stem + ".divergence.csv"),
          dir / (stem + ".summary.json"), dir / (stem + ".features.csv")};
}

// Mines one snapshot per window. All refs are resolved before anything is
// written.
inline std::vector<fs::path> cmd_mine(const RunConfig& config, Diagnostics* diag = nullptr) {
  validate(config);
  MinerConfig mc;
  mc.extensions = config.extensions;
  mc.threads = config.threads;
  if (config.alias_map_path) mc.aliases = load_alias_map(*config.alias_map_path);

  check_repository(config.repo_path);
  for (const auto& w : config.windows) {
    resolve_commit(config.repo_path, w.release_ref);
    if (!w.predecessor_ref.empty()) resolve_commit(config.repo_path, w.predecessor_ref);
  }

  std::vector<fs::path> written;
  for (const auto& w : config.windows) {
    auto snap = build_snapshot(config.repo_path, w, mc, diag);
    auto path = output_paths(config, w).snapshot;
    save_snapshot(path, snap);
    written.push_back(path);
  }
  return written;
}

inline std::vector<fs::path> cmd_analyze(const RunConfig& config, Diagnostics* diag = nullptr) {
  validate(config);
  std::vector<fs::path> written;
  for (const auto& w : config.windows) {
    auto paths = output_paths(config, w);
    auto snap = load_snapshot(paths.snapshot);
    auto profiles = build_profiles(snap, config.expertise_threshold);
    Diagnostics local;
    auto rep = divergence_report(snap, profiles, &local);
    write_file_atomic(paths.ownership, csv::write(ownership_table(profiles)));
    write_file_atomic(paths.divergence, csv::write(divergence_table(rep)));
    write_file_atomic(paths.summary, summary_json(rep, config.expertise_threshold, local.messages).dump(2) + "\n");
    if (diag)
      for (auto& m : local.messages) diag->note(std::move(m));
    written.insert(written.end(), {paths.ownership, paths.divergence, paths.summary});
  }
  return written;
}

inline std::vector<fs::path> cmd_features(const RunConfig& config, Diagnostics* diag = nullptr) {
  validate(config);
  std::optional<KeyedTable> labels, confounders;
  if (config.labels_path) labels = load_labels(csv::read_file(*config.labels_path));
  if (config.confounders_path) confounders = load_confounders(csv::read_file(*config.confounders_path));

  std::vector<fs::path> written;
  for (const auto& w : config.windows) {
    auto paths = output_paths(config, w);
    auto snap = load_snapshot(paths.snapshot);
    auto table = features_table(feature_vectors(snap, config.expertise_threshold), snap,
                                labels ? &*labels : nullptr, confounders ? &*confounders : nullptr, diag);
    write_file_atomic(paths.features, csv::write(table));
    written.push_back(paths.features);
  }
  return written;
}

// (group_id, value) CSV in, (group_id, rank) CSV out, ordered by rank then id.
inline std::string cmd_npsk(const std::string& input_csv) {
  auto table = csv::parse(input_csv);
  if (table.header.size() != 2) throw ConfigError("npsk: expected two columns (group_id, value)");
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[0].empty()) throw ConfigError("npsk: empty group id on record " + std::to_string(r + 2));
    groups[row[0]].push_back(csv::parse_number(row[1], "npsk record " + std::to_string(r + 2)));
  }
  if (groups.empty()) throw ConfigError("npsk: no data rows");
  auto ranks = stats::npsk_rank(groups);
  csv::Table out{{"group_id", "rank"}, {}};
  for (std::size_t i = 0; i < ranks.group_ids.size(); ++i)
    out.rows.push_back({ranks.group_ids[i], std::to_string(ranks.ranks[i])});
  return csv::write(out);
}

}  // namespace codeown
