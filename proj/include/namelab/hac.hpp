// Average-linkage hierarchical agglomerative clustering over blocks, driven
// by pairwise classifier probabilities, plus dev-set threshold selection.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "namelab/evaluation.hpp"
#include "namelab/record.hpp"

namespace namelab {

using PairScores = std::map<std::pair<std::string, std::string>, double>;

inline double pair_score(const PairScores& scores, const std::string& a,
                         const std::string& b) {
  const auto it = scores.find(a < b ? std::make_pair(a, b)
                                    : std::make_pair(b, a));
  return it == scores.end() ? 0.0 : it->second;
}

// Agglomerates one block: merge the highest mean-probability cluster pair
// while it reaches the threshold. Ties break toward the smallest member
// ids, so the result is independent of input order.
inline std::vector<std::vector<std::string>> hac_cluster(
    std::vector<std::string> members, const PairScores& scores,
    double threshold) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<std::vector<std::string>> clusters;
  clusters.reserve(members.size());
  for (auto& id : members) clusters.push_back({std::move(id)});

  while (clusters.size() > 1) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double sum = 0.0;
        for (const auto& a : clusters[i])
          for (const auto& b : clusters[j]) sum += pair_score(scores, a, b);
        const double linkage =
            sum / static_cast<double>(clusters[i].size() * clusters[j].size());
        if (linkage > best) {
          best = linkage;
          bi = i;
          bj = j;
        }
      }
    }
    if (best < threshold) break;
    auto& into = clusters[bi];
    into.insert(into.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(into.begin(), into.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    // keep clusters ordered by smallest member for deterministic ties
    std::sort(clusters.begin(), clusters.end());
  }
  return clusters;
}

// Runs HAC on every block and names each output cluster after its smallest
// member.
inline LabelMap hac_label_blocks(
    const std::map<std::string, std::vector<std::string>>& blocks,
    const PairScores& scores, double threshold) {
  LabelMap labels;
  for (const auto& [block, members] : blocks) {
    for (const auto& cluster : hac_cluster(members, scores, threshold)) {
      const auto& cluster_id = cluster.front();  // sorted; smallest member
      for (const auto& id : cluster) labels[id] = cluster_id;
    }
  }
  return labels;
}

struct ThresholdChoice {
  double threshold = 0.5;
  double dev_f1 = 0.0;
  bool f1_defined = false;
};

inline std::vector<double> uniform_grid(double start, double stop,
                                        double step) {
  std::vector<double> grid;
  for (double t = start; t <= stop + 1e-12; t += step)
    grid.push_back(std::min(t, stop));
  return grid;
}

// The observed-means alternative: every distinct per-block mean pairwise
// score, usable as a data-derived threshold grid.
inline std::vector<double> observed_mean_grid(
    const std::map<std::string, std::vector<std::string>>& blocks,
    const PairScores& scores) {
  std::set<double> means;
  for (const auto& [block, members] : blocks) {
    if (members.size() < 2) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        sum += pair_score(scores, members[i], members[j]);
        ++count;
      }
    if (count > 0) means.insert(sum / static_cast<double>(count));
  }
  return {means.begin(), means.end()};
}

// Picks the grid threshold maximizing pairwise F1 of HAC output against the
// development labels; ties go to the higher threshold.
inline ThresholdChoice select_threshold(
    const std::map<std::string, std::vector<std::string>>& blocks,
    const PairScores& scores, const TruthLabels& dev_labels,
    const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("select_threshold: empty threshold grid");
  ThresholdChoice choice;
  double best_f1 = -2.0;  // undefined F1 scores -1, any defined value wins
  for (const auto t : grid) {
    const auto labels = hac_label_blocks(blocks, scores, t);
    const auto report = pairwise_metrics(labels, dev_labels);
    const double f1 = report.pF1_defined ? report.pF1 : -1.0;
    if (f1 > best_f1 || (f1 == best_f1 && t > choice.threshold)) {
      best_f1 = f1;
      choice.threshold = t;
      choice.dev_f1 = report.pF1_defined ? report.pF1 : 0.0;
      choice.f1_defined = report.pF1_defined;
    }
  }
  return choice;
}

}  // namespace namelab
