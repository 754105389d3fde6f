#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeown/error.hpp"

namespace codeown::stats {

// ---------------------------------------------------------------------------
// Magnitude labels

enum class CorrelationStrength { Weak, Moderate, Strong };
enum class EffectMagnitude { Negligible, Small, Medium, Large };

inline CorrelationStrength correlation_strength(double rho) {
  double a = std::abs(rho);
  if (a < 0.3) return CorrelationStrength::Weak;
  if (a < 0.7) return CorrelationStrength::Moderate;
  return CorrelationStrength::Strong;
}

inline EffectMagnitude effect_magnitude(double delta) {
  double a = std::abs(delta);
  if (a < 0.147) return EffectMagnitude::Negligible;
  if (a < 0.33) return EffectMagnitude::Small;
  if (a < 0.474) return EffectMagnitude::Medium;
  return EffectMagnitude::Large;
}

inline std::string_view to_string(CorrelationStrength s) {
  switch (s) {
    case CorrelationStrength::Weak: return "weak";
    case CorrelationStrength::Moderate: return "moderate";
    case CorrelationStrength::Strong: return "strong";
  }
  return "";
}

inline std::string_view to_string(EffectMagnitude m) {
  switch (m) {
    case EffectMagnitude::Negligible: return "negligible";
    case EffectMagnitude::Small: return "small";
    case EffectMagnitude::Medium: return "medium";
    case EffectMagnitude::Large: return "large";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Helpers

inline double median(std::vector<double> values) {
  if (values.empty()) throw UndefinedStatistic("median of an empty sample");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// ---------------------------------------------------------------------------
// Spearman

struct CorrelationResult {
  double rho = 0.0;
  std::size_t n = 0;
  CorrelationStrength magnitude = CorrelationStrength::Weak;
};

// Pearson correlation of average-tie ranks. Throws UndefinedStatistic when
// either sample is constant.
inline CorrelationResult spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UndefinedStatistic("spearman: samples differ in length");
  if (x.size() < 2) throw UndefinedStatistic("spearman: need at least two pairs");
  auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedStatistic("spearman: all ranks tied in one sample");
  double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {rho, x.size(), correlation_strength(rho)};
}

// ---------------------------------------------------------------------------
// Wilcoxon rank sum (Mann-Whitney), one-sided

enum class Alternative { Greater, Less };

inline constexpr std::size_t kExactWilcoxonLimit = 20;

struct RankSumResult {
  double rank_sum = 0.0;  // sum of the ranks of x in the pooled sample
  double u = 0.0;         // rank_sum - n_x (n_x + 1) / 2
  double p_value = 1.0;
  bool exact = false;
};

namespace detail {

// counts[s] = number of k-subsets of {1..n} whose elements sum to s.
inline std::vector<double> subset_sum_counts(std::size_t n, std::size_t k) {
  std::size_t max_sum = n * (n + 1) / 2;
  std::vector<std::vector<double>> dp(k + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r)
    for (std::size_t j = std::min(k, r); j >= 1; --j)
      for (std::size_t s = max_sum; s >= r; --s) dp[j][s] += dp[j - 1][s - r];
  return dp[k];
}

inline double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

// H1 (Greater): x is stochastically greater than y. Exact null distribution
// when the pooled size is <= 20 without ties; otherwise the normal
// approximation with tie and continuity correction.
inline RankSumResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Alternative alt) {
  if (x.empty() || y.empty()) throw UndefinedStatistic("wilcoxon: empty sample");
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  auto ranks = average_ranks(pooled);

  const std::size_t nx = x.size(), ny = y.size(), n = nx + ny;
  RankSumResult r;
  r.rank_sum = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(nx), 0.0);
  r.u = r.rank_sum - static_cast<double>(nx * (nx + 1)) / 2.0;

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    double t = static_cast<double>(j - i);
    if (t > 1) ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  if (n <= kExactWilcoxonLimit && !ties) {
    auto counts = detail::subset_sum_counts(n, nx);
    auto observed = static_cast<std::size_t>(std::llround(r.rank_sum));
    double total = 0.0, tail = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      total += counts[s];
      if (alt == Alternative::Greater ? s >= observed : s <= observed) tail += counts[s];
    }
    r.p_value = tail / total;
    r.exact = true;
    return r;
  }

  double dnx = static_cast<double>(nx), dny = static_cast<double>(ny), dn = static_cast<double>(n);
  double mean = dnx * dny / 2.0;
  double var = dnx * dny / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    r.p_value = 0.5;
    return r;
  }
  double sd = std::sqrt(var);
  if (alt == Alternative::Greater)
    r.p_value = detail::normal_upper_tail((r.u - mean - 0.5) / sd);
  else
    r.p_value = 1.0 - detail::normal_upper_tail((r.u - mean + 0.5) / sd);
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  return r;
}

inline double wilcoxon_one_sided(std::span<const double> x, std::span<const double> y, Alternative alt) {
  return wilcoxon_rank_sum(x, y, alt).p_value;
}

// ---------------------------------------------------------------------------
// Cliff's delta

struct EffectSizeResult {
  double delta = 0.0;
  EffectMagnitude magnitude = EffectMagnitude::Negligible;
};

// (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|), via binary search over sorted y.
inline EffectSizeResult cliffs_delta(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw UndefinedStatistic("cliffs delta: empty sample");
  std::vector<double> ys(y.begin(), y.end());
  std::sort(ys.begin(), ys.end());
  std::int64_t dominance = 0;
  for (double xi : x) {
    auto below = std::lower_bound(ys.begin(), ys.end(), xi) - ys.begin();
    auto above = ys.end() - std::upper_bound(ys.begin(), ys.end(), xi);
    dominance += below - above;
  }
  double delta = static_cast<double>(dominance) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  return {delta, effect_magnitude(delta)};
}

// ---------------------------------------------------------------------------
// Non-parametric ScottKnott ESD
//
// Groups are ordered by descending median. A segment of that order is split at
// the boundary that maximises the between-partition variance of the medians;
// the split stands only if the two groups adjacent to the boundary differ by a
// non-negligible Cliff's delta. Accepted halves are split recursively.

struct RankAssignment {
  std::vector<std::string> group_ids;  // sorted by (rank, id)
  std::vector<int> ranks;              // 1 = highest median

  int rank_of(std::string_view id) const {
    for (std::size_t i = 0; i < group_ids.size(); ++i)
      if (group_ids[i] == id) return ranks[i];
    throw NotFoundError("npsk: unknown group '" + std::string(id) + "'");
  }
  int rank_count() const { return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end()); }
};

namespace detail {

struct OrderedGroup {
  std::string id;
  std::vector<double> sorted_values;
  double median = 0.0;
};

inline void npsk_split(const std::vector<OrderedGroup>& groups, std::size_t lo, std::size_t hi,
                       std::vector<std::size_t>& cut_points) {
  if (hi - lo < 2) return;
  double mean = 0.0;
  for (std::size_t i = lo; i < hi; ++i) mean += groups[i].median;
  mean /= static_cast<double>(hi - lo);

  std::size_t best = lo + 1;
  double best_between = -1.0;
  for (std::size_t k = lo + 1; k < hi; ++k) {
    double left = 0.0, right = 0.0;
    for (std::size_t i = lo; i < k; ++i) left += groups[i].median;
    for (std::size_t i = k; i < hi; ++i) right += groups[i].median;
    double nl = static_cast<double>(k - lo), nr = static_cast<double>(hi - k);
    left /= nl;
    right /= nr;
    double between = nl * (left - mean) * (left - mean) + nr * (right - mean) * (right - mean);
    if (between > best_between) {
      best_between = between;
      best = k;
    }
  }
  auto effect = cliffs_delta(groups[best - 1].sorted_values, groups[best].sorted_values);
  if (effect.magnitude == EffectMagnitude::Negligible) return;
  npsk_split(groups, lo, best, cut_points);
  cut_points.push_back(best);
  npsk_split(groups, best, hi, cut_points);
}

}  // namespace detail

inline RankAssignment npsk_rank(const std::map<std::string, std::vector<double>>& groups) {
  std::vector<detail::OrderedGroup> ordered;
  ordered.reserve(groups.size());
  for (const auto& [id, values] : groups) {
    if (values.empty()) throw UndefinedStatistic("npsk: group '" + id + "' is empty");
    detail::OrderedGroup g{id, values, 0.0};
    std::sort(g.sorted_values.begin(), g.sorted_values.end());
    g.median = median(g.sorted_values);
    ordered.push_back(std::move(g));
  }
  // Ties on the median are broken by the values themselves so the ranking
  // does not depend on group names.
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.median != b.median) return a.median > b.median;
    if (a.sorted_values != b.sorted_values) return a.sorted_values > b.sorted_values;
    return a.id < b.id;
  });

  std::vector<std::size_t> cuts;
  detail::npsk_split(ordered, 0, ordered.size(), cuts);

  std::vector<std::pair<int, std::string>> assigned;
  int rank = 1;
  std::size_t next_cut = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (next_cut < cuts.size() && cuts[next_cut] == i) {
      ++rank;
      ++next_cut;
    }
    assigned.emplace_back(rank, ordered[i].id);
  }
  std::sort(assigned.begin(), assigned.end());
  RankAssignment out;
  for (auto& [r, id] : assigned) {
    out.ranks.push_back(r);
    out.group_ids.push_back(std::move(id));
  }
  return out;
}

}  // namespace codeown::stats
