// Pairwise precision/recall/F1 against truth labels, block-size statistics
// with power-law fits, and categorical tag-ratio comparisons.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "namelab/record.hpp"

namespace namelab {

struct EvaluationReport {
  double pP = 0.0, pR = 0.0, pF1 = 0.0;
  bool pP_defined = false, pR_defined = false, pF1_defined = false;
  std::size_t predicted_clusters = 0;
  std::size_t truth_clusters = 0;
  std::size_t evaluable_instances = 0;
  std::size_t predicted_pairs = 0;
  std::size_t truth_pairs = 0;
  std::size_t common_pairs = 0;
};

namespace detail {
inline std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }
}

// Pairwise metrics over the instances present in both maps. An instance is
// comparable only when its truth author has a second labeled instance in
// that set; the rest are excluded from every count. Zero-pair denominators
// make the ratio undefined (flagged), never silently 0 or 1.
inline EvaluationReport pairwise_metrics(const LabelMap& predicted,
                                         const TruthLabels& truth) {
  // shared domain
  std::map<std::string, std::size_t> truth_sizes;
  for (const auto& [id, author] : truth)
    if (predicted.count(id)) ++truth_sizes[author];

  EvaluationReport report;
  std::map<std::string, std::size_t> per_pred, per_truth;
  std::map<std::pair<std::string, std::string>, std::size_t> per_both;
  for (const auto& [id, author] : truth) {
    const auto pit = predicted.find(id);
    if (pit == predicted.end()) continue;
    if (truth_sizes[author] < 2) continue;  // no comparable pair
    ++report.evaluable_instances;
    ++per_pred[pit->second];
    ++per_truth[author];
    ++per_both[{pit->second, author}];
  }
  report.predicted_clusters = per_pred.size();
  report.truth_clusters = per_truth.size();
  for (const auto& [c, n] : per_pred) report.predicted_pairs += detail::choose2(n);
  for (const auto& [a, n] : per_truth) report.truth_pairs += detail::choose2(n);
  for (const auto& [key, n] : per_both) report.common_pairs += detail::choose2(n);

  if (report.predicted_pairs > 0) {
    report.pP = static_cast<double>(report.common_pairs) /
                static_cast<double>(report.predicted_pairs);
    report.pP_defined = true;
  }
  if (report.truth_pairs > 0) {
    report.pR = static_cast<double>(report.common_pairs) /
                static_cast<double>(report.truth_pairs);
    report.pR_defined = true;
  }
  if (report.pP_defined && report.pR_defined && report.pP + report.pR > 0) {
    report.pF1 = 2.0 * report.pP * report.pR / (report.pP + report.pR);
    report.pF1_defined = true;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Block-size distribution

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool fitted = false;
};

// OLS of log r against log n over points with r > 0.
inline PowerLawFit fit_power_law(
    const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  std::set<double> distinct_x;
  for (const auto& [n, r] : points) {
    if (n <= 0 || r <= 0) continue;
    logs.emplace_back(std::log(n), std::log(r));
    distinct_x.insert(n);
  }
  PowerLawFit fit;
  if (distinct_x.size() < 2) return fit;  // not fittable, flagged

  double sx = 0, sy = 0;
  for (const auto& [x, y] : logs) { sx += x; sy += y; }
  const double mx = sx / logs.size(), my = sy / logs.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : logs) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
  }
  fit.r2 = syy > 0 ? 1.0 - ss_res / syy : (ss_res == 0 ? 1.0 : 0.0);
  fit.fitted = true;
  return fit;
}

struct BlockStats {
  std::size_t instances = 0;
  std::size_t blocks = 0;
  // r(n) = (#blocks of size >= n) / (#blocks), for n = 1..max size
  std::vector<std::pair<std::size_t, double>> cumulative;
  PowerLawFit fit;
};

// Cumulative block-size ratios from a list of block keys (one per
// instance), with a power-law fit over n in [fit_lo, fit_hi].
inline BlockStats block_stats(const std::vector<std::string>& block_keys,
                              std::size_t fit_lo = 1, std::size_t fit_hi = 60) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& key : block_keys) ++sizes[key];
  BlockStats stats;
  stats.instances = block_keys.size();
  stats.blocks = sizes.size();
  if (stats.blocks == 0) return stats;

  std::size_t max_size = 0;
  for (const auto& [key, n] : sizes) max_size = std::max(max_size, n);
  // count_ge[n] = number of blocks with size >= n
  std::vector<std::size_t> count_ge(max_size + 2, 0);
  for (const auto& [key, n] : sizes) ++count_ge[n];
  for (std::size_t n = max_size; n >= 1; --n) count_ge[n] += count_ge[n + 1];
  for (std::size_t n = 1; n <= max_size; ++n)
    stats.cumulative.emplace_back(
        n, static_cast<double>(count_ge[n]) / static_cast<double>(stats.blocks));

  std::vector<std::pair<double, double>> window;
  for (const auto& [n, r] : stats.cumulative)
    if (n >= fit_lo && n <= fit_hi)
      window.emplace_back(static_cast<double>(n), r);
  stats.fit = fit_power_law(window);
  return stats;
}

// ---------------------------------------------------------------------------
// Tag-ratio comparison (subset vs population)

struct TagRatioReport {
  struct Row {
    std::string category;
    double subset_ratio = 0.0;
    double population_ratio = 0.0;
    double abs_diff = 0.0;
  };
  std::vector<Row> rows;  // sorted by population frequency desc, then name
};

// Per-category ratios for a subset against its population. Untagged
// instances count under "Null". Ratios in each column sum to 1.
inline TagRatioReport tag_ratios(
    const std::set<std::string>& subset, const std::set<std::string>& population,
    const std::map<std::string, std::string>& tags) {
  if (tags.empty()) throw std::invalid_argument("tag_ratios: empty tag map");
  if (population.empty())
    throw std::invalid_argument("tag_ratios: empty population");

  auto tag_of = [&](const std::string& id) -> std::string {
    const auto it = tags.find(id);
    return it == tags.end() || it->second.empty() ? "Null" : it->second;
  };
  std::map<std::string, std::size_t> sub_counts, pop_counts;
  for (const auto& id : population) ++pop_counts[tag_of(id)];
  for (const auto& id : subset) ++sub_counts[tag_of(id)];

  TagRatioReport report;
  for (const auto& [category, n] : pop_counts) {
    TagRatioReport::Row row;
    row.category = category;
    row.population_ratio =
        static_cast<double>(n) / static_cast<double>(population.size());
    if (!subset.empty()) {
      const auto it = sub_counts.find(category);
      row.subset_ratio =
          it == sub_counts.end()
              ? 0.0
              : static_cast<double>(it->second) /
                    static_cast<double>(subset.size());
    }
    row.abs_diff = std::abs(row.subset_ratio - row.population_ratio);
    report.rows.push_back(std::move(row));
  }
  // a subset category missing from the population still belongs in the table
  for (const auto& [category, n] : sub_counts) {
    if (pop_counts.count(category)) continue;
    TagRatioReport::Row row;
    row.category = category;
    row.subset_ratio =
        static_cast<double>(n) / static_cast<double>(subset.size());
    row.abs_diff = row.subset_ratio;
    report.rows.push_back(std::move(row));
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const auto& a, const auto& b) {
              if (a.population_ratio != b.population_ratio)
                return a.population_ratio > b.population_ratio;
              return a.category < b.category;
            });
  return report;
}

}  // namespace namelab
