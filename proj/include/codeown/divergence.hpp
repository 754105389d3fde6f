#pragma once

// Disagreement between the commit-based and line-based approximations.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "codeown/error.hpp"
#include "codeown/miner.hpp"
#include "codeown/ownership.hpp"
#include "codeown/stats.hpp"

namespace codeown {

struct SetOverlap {
  std::size_t n_common = 0;
  std::size_t n_commit_only = 0;
  std::size_t n_line_only = 0;
  double common = 0.0;
  double commit_only = 0.0;
  double line_only = 0.0;
};

struct DivergenceRecord {
  std::string path;
  SetOverlap overlap;
  std::optional<double> rho;
  std::optional<double> expertise_consistency;
};

struct ExclusiveComparison {
  std::string release_name;
  std::vector<double> commit_only_values;  // own_commit of commit-only developers
  std::vector<double> line_only_values;    // own_line of line-only developers
  double p_value = 1.0;                    // H1: commit-only values are greater
  double delta = 0.0;
  stats::EffectMagnitude magnitude = stats::EffectMagnitude::Negligible;
  double major_fraction_commit_only = 0.0;
  double major_fraction_line_only = 0.0;
};

// Throws UndefinedStatistic when neither approach identifies anyone.
inline SetOverlap set_overlap(const FileOwnershipProfile& profile) {
  SetOverlap o;
  for (const auto& [key, d] : profile.per_developer) {
    if (d.own_commit && d.own_line)
      ++o.n_common;
    else if (d.own_commit)
      ++o.n_commit_only;
    else if (d.own_line)
      ++o.n_line_only;
  }
  std::size_t total = o.n_common + o.n_commit_only + o.n_line_only;
  if (total == 0) throw UndefinedStatistic("no developers identified for " + profile.path);
  double t = static_cast<double>(total);
  o.common = static_cast<double>(o.n_common) / t;
  o.commit_only = static_cast<double>(o.n_commit_only) / t;
  o.line_only = static_cast<double>(o.n_line_only) / t;
  return o;
}

// Spearman rho over (own_commit, own_line) of the common developers.
// Absent for fewer than two common developers or when one side is constant.
inline std::optional<double> ownership_correlation(const FileOwnershipProfile& profile, Diagnostics* diag = nullptr) {
  std::vector<double> commit_values, line_values;
  for (const auto& [key, d] : profile.per_developer) {
    if (d.own_commit && d.own_line) {
      commit_values.push_back(d.own_commit->value);
      line_values.push_back(d.own_line->value);
    }
  }
  if (commit_values.size() < 2) return std::nullopt;
  try {
    return stats::spearman_rho(commit_values, line_values).rho;
  } catch (const UndefinedStatistic&) {
    if (diag) diag->note("correlation undefined (tied ownership values) for " + profile.path);
    return std::nullopt;
  }
}

inline std::optional<double> expertise_consistency(const FileOwnershipProfile& profile) {
  std::size_t common = 0, consistent = 0;
  for (const auto& [key, d] : profile.per_developer) {
    if (!(d.own_commit && d.own_line)) continue;
    ++common;
    if (*d.level_commit == *d.level_line) ++consistent;
  }
  if (common == 0) return std::nullopt;
  return static_cast<double>(consistent) / static_cast<double>(common);
}

// Pools every (file, developer) pair of the release. Absent when either pool
// is empty.
inline std::optional<ExclusiveComparison> exclusive_comparison(const std::string& release_name,
                                                               const std::vector<FileOwnershipProfile>& profiles,
                                                               Diagnostics* diag = nullptr) {
  ExclusiveComparison cmp;
  cmp.release_name = release_name;
  std::size_t major_commit_only = 0, major_line_only = 0;
  for (const auto& p : profiles) {
    for (const auto& [key, d] : p.per_developer) {
      if (d.own_commit && !d.own_line) {
        cmp.commit_only_values.push_back(d.own_commit->value);
        if (*d.level_commit == ExpertiseLevel::Major) ++major_commit_only;
      } else if (d.own_line && !d.own_commit) {
        cmp.line_only_values.push_back(d.own_line->value);
        if (*d.level_line == ExpertiseLevel::Major) ++major_line_only;
      }
    }
  }
  if (cmp.commit_only_values.empty() || cmp.line_only_values.empty()) {
    if (diag)
      diag->note("release " + release_name + ": exclusive-developer comparison skipped (commit_only pool " +
                 std::to_string(cmp.commit_only_values.size()) + ", line_only pool " +
                 std::to_string(cmp.line_only_values.size()) + ")");
    return std::nullopt;
  }
  // Pool order follows file order; sort so the result is order-independent.
  std::sort(cmp.commit_only_values.begin(), cmp.commit_only_values.end());
  std::sort(cmp.line_only_values.begin(), cmp.line_only_values.end());
  cmp.p_value = stats::wilcoxon_one_sided(cmp.commit_only_values, cmp.line_only_values, stats::Alternative::Greater);
  auto effect = stats::cliffs_delta(cmp.commit_only_values, cmp.line_only_values);
  cmp.delta = effect.delta;
  cmp.magnitude = effect.magnitude;
  cmp.major_fraction_commit_only =
      static_cast<double>(major_commit_only) / static_cast<double>(cmp.commit_only_values.size());
  cmp.major_fraction_line_only =
      static_cast<double>(major_line_only) / static_cast<double>(cmp.line_only_values.size());
  return cmp;
}

inline std::optional<ExclusiveComparison> exclusive_comparison(const ReleaseSnapshot& snapshot,
                                                               const std::vector<FileOwnershipProfile>& profiles,
                                                               Diagnostics* diag = nullptr) {
  return exclusive_comparison(snapshot.window.release_name, profiles, diag);
}

struct ReleaseDivergence {
  std::string release_name;
  std::vector<DivergenceRecord> records;  // files with a non-empty D_C ∪ D_L
  std::size_t n_files = 0;                // profiles examined
  std::size_t n_skipped = 0;              // empty union
  std::size_t n_rho_excluded = 0;         // records without rho
  std::optional<double> median_common;
  std::optional<double> median_commit_only;
  std::optional<double> median_line_only;
  std::optional<double> median_rho;
  std::optional<stats::CorrelationStrength> median_rho_strength;
  std::optional<double> median_expertise_consistency;
  std::optional<ExclusiveComparison> exclusive;
};

inline DivergenceRecord divergence_record(const FileOwnershipProfile& profile, Diagnostics* diag = nullptr) {
  return {profile.path, set_overlap(profile), ownership_correlation(profile, diag), expertise_consistency(profile)};
}

inline ReleaseDivergence divergence_report(const std::string& release_name,
                                           const std::vector<FileOwnershipProfile>& profiles,
                                           Diagnostics* diag = nullptr) {
  ReleaseDivergence rep;
  rep.release_name = release_name;
  rep.n_files = profiles.size();

  std::vector<const FileOwnershipProfile*> sorted;
  for (const auto& p : profiles) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->path < b->path; });

  std::vector<double> common, commit_only, line_only, rhos, consistency;
  for (const auto* p : sorted) {
    if (p->per_developer.empty()) {
      ++rep.n_skipped;
      if (diag) diag->note("no developers identified for " + p->path + "; divergence record skipped");
      continue;
    }
    auto rec = divergence_record(*p, diag);
    common.push_back(rec.overlap.common);
    commit_only.push_back(rec.overlap.commit_only);
    line_only.push_back(rec.overlap.line_only);
    if (rec.rho)
      rhos.push_back(*rec.rho);
    else
      ++rep.n_rho_excluded;
    if (rec.expertise_consistency) consistency.push_back(*rec.expertise_consistency);
    rep.records.push_back(std::move(rec));
  }
  if (!common.empty()) {
    rep.median_common = stats::median(common);
    rep.median_commit_only = stats::median(commit_only);
    rep.median_line_only = stats::median(line_only);
  }
  if (!rhos.empty()) {
    rep.median_rho = stats::median(rhos);
    rep.median_rho_strength = stats::correlation_strength(*rep.median_rho);
  }
  if (!consistency.empty()) rep.median_expertise_consistency = stats::median(consistency);
  rep.exclusive = exclusive_comparison(release_name, profiles, diag);
  return rep;
}

inline ReleaseDivergence divergence_report(const ReleaseSnapshot& snapshot,
                                           const std::vector<FileOwnershipProfile>& profiles,
                                           Diagnostics* diag = nullptr) {
  return divergence_report(snapshot.window.release_name, profiles, diag);
}

}  // namespace codeown
