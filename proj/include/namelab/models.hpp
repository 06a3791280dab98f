// Pairwise classifiers: L2-regularized logistic regression, Gaussian naive
// Bayes, and a Gini-impurity random forest, with versioned JSON
// serialization.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "namelab/pairs.hpp"

namespace namelab {

enum class ModelKind { logistic_regression, gaussian_naive_bayes, random_forest };

inline const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::gaussian_naive_bayes: return "gaussian_naive_bayes";
    case ModelKind::random_forest: return "random_forest";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "logistic_regression" || s == "lr")
    return ModelKind::logistic_regression;
  if (s == "gaussian_naive_bayes" || s == "nb")
    return ModelKind::gaussian_naive_bayes;
  if (s == "random_forest" || s == "rf") return ModelKind::random_forest;
  throw std::invalid_argument("unknown classifier kind: " + s);
}

struct TrainConfig {
  double l2 = 1.0;          // L2 strength on weights (bias unpenalized)
  double tol = 1e-6;        // mean-gradient norm tolerance
  int max_iters = 10000;
  int trees = 500;
  int max_depth = 0;        // 0 = unlimited
  int min_leaf = 1;
  int mtry = 2;             // features considered per split (~sqrt(3))
  double variance_floor = 1e-9;
  std::uint64_t seed = 0;
};

namespace detail {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
inline double log1pexp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Logistic regression

class LogisticRegression {
 public:
  std::array<double, FeatureVector::dims> weights{};
  double bias = 0.0;
  int iterations = 0;

  double decision(const FeatureVector& x) const {
    double z = bias;
    for (std::size_t f = 0; f < FeatureVector::dims; ++f)
      z += weights[f] * x[f];
    return z;
  }

  double predict(const FeatureVector& x) const {
    return detail::sigmoid(decision(x));
  }

  // Penalized negative log-likelihood: sum nll + l2/2 * |w|^2.
  double loss(const std::vector<TrainingPair>& pairs, double l2) const {
    double total = 0.0;
    for (const auto& p : pairs) {
      const double z = decision(p.x);
      total += p.positive ? detail::log1pexp(-z) : detail::log1pexp(z);
    }
    double reg = 0.0;
    for (const auto w : weights) reg += w * w;
    return total + 0.5 * l2 * reg;
  }

  // Damped Newton-Raphson on the penalized likelihood; each step is halved
  // until the loss decreases, so the loss is non-increasing across
  // iterations. Stops when the mean gradient norm falls below tol.
  void fit(const std::vector<TrainingPair>& pairs, const TrainConfig& config) {
    constexpr std::size_t d = FeatureVector::dims + 1;  // + bias
    const double n = static_cast<double>(pairs.size());
    double current_loss = loss(pairs, config.l2);
    for (iterations = 0; iterations < config.max_iters; ++iterations) {
      std::array<double, d> grad{};
      std::array<std::array<double, d>, d> hess{};
      for (const auto& p : pairs) {
        const double mu = detail::sigmoid(decision(p.x));
        const double r = mu - (p.positive ? 1.0 : 0.0);
        const double s = std::max(mu * (1.0 - mu), 1e-12);
        std::array<double, d> xs{};
        for (std::size_t f = 0; f < FeatureVector::dims; ++f) xs[f] = p.x[f];
        xs[d - 1] = 1.0;
        for (std::size_t f = 0; f < d; ++f) {
          grad[f] += r * xs[f];
          for (std::size_t g = 0; g < d; ++g) hess[f][g] += s * xs[f] * xs[g];
        }
      }
      for (std::size_t f = 0; f < FeatureVector::dims; ++f) {
        grad[f] += config.l2 * weights[f];
        hess[f][f] += config.l2;
      }
      double grad_norm = 0.0;
      for (const auto g : grad) grad_norm += g * g;
      grad_norm = std::sqrt(grad_norm) / n;
      if (grad_norm <= config.tol) return;

      const auto step = solve(hess, grad);
      double scale = 1.0;
      bool improved = false;
      for (int halvings = 0; halvings < 60; ++halvings) {
        LogisticRegression trial = *this;
        for (std::size_t f = 0; f < FeatureVector::dims; ++f)
          trial.weights[f] -= scale * step[f];
        trial.bias -= scale * step[d - 1];
        const double trial_loss = trial.loss(pairs, config.l2);
        if (trial_loss <= current_loss) {
          weights = trial.weights;
          bias = trial.bias;
          current_loss = trial_loss;
          improved = true;
          break;
        }
        scale *= 0.5;
      }
      if (!improved) return;  // at numerical floor; gradient check next loop
    }
    // one final check so a converged-at-the-limit fit is not rejected
    std::array<double, d> grad{};
    for (const auto& p : pairs) {
      const double r = detail::sigmoid(decision(p.x)) - (p.positive ? 1 : 0);
      for (std::size_t f = 0; f < FeatureVector::dims; ++f)
        grad[f] += r * p.x[f];
      grad[d - 1] += r;
    }
    for (std::size_t f = 0; f < FeatureVector::dims; ++f)
      grad[f] += config.l2 * weights[f];
    double grad_norm = 0.0;
    for (const auto g : grad) grad_norm += g * g;
    if (std::sqrt(grad_norm) / n > config.tol)
      throw std::runtime_error(
          "logistic regression did not converge in " +
          std::to_string(config.max_iters) + " iterations (mean |grad| = " +
          std::to_string(std::sqrt(grad_norm) / n) + ", tol = " +
          std::to_string(config.tol) + ")");
  }

 private:
  static constexpr std::size_t kDim = FeatureVector::dims + 1;

  // Gaussian elimination with partial pivoting; falls back to the gradient
  // when the Hessian is singular.
  static std::array<double, kDim> solve(
      std::array<std::array<double, kDim>, kDim> a,
      std::array<double, kDim> b) {
    std::array<double, kDim> x = b;
    for (std::size_t col = 0; col < kDim; ++col) {
      std::size_t pivot = col;
      for (std::size_t row = col + 1; row < kDim; ++row)
        if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
      if (std::abs(a[pivot][col]) < 1e-12) return b;  // singular
      std::swap(a[col], a[pivot]);
      std::swap(x[col], x[pivot]);
      for (std::size_t row = col + 1; row < kDim; ++row) {
        const double f = a[row][col] / a[col][col];
        for (std::size_t c = col; c < kDim; ++c) a[row][c] -= f * a[col][c];
        x[row] -= f * x[col];
      }
    }
    for (std::size_t col = kDim; col-- > 0;) {
      for (std::size_t c = col + 1; c < kDim; ++c) x[col] -= a[col][c] * x[c];
      x[col] /= a[col][col];
    }
    return x;
  }
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GaussianNaiveBayes {
 public:
  std::array<double, 2> log_prior{};  // [negative, positive]
  std::array<std::array<double, FeatureVector::dims>, 2> mean{};
  std::array<std::array<double, FeatureVector::dims>, 2> variance{};

  void fit(const std::vector<TrainingPair>& pairs, const TrainConfig& config) {
    std::array<std::size_t, 2> count{};
    for (const auto& p : pairs) ++count[p.positive ? 1 : 0];
    for (int c = 0; c < 2; ++c)
      log_prior[c] = std::log(static_cast<double>(count[c]) /
                              static_cast<double>(pairs.size()));
    for (const auto& p : pairs) {
      const int c = p.positive ? 1 : 0;
      for (std::size_t f = 0; f < FeatureVector::dims; ++f)
        mean[c][f] += p.x[f];
    }
    for (int c = 0; c < 2; ++c)
      for (std::size_t f = 0; f < FeatureVector::dims; ++f)
        mean[c][f] /= static_cast<double>(count[c]);
    for (const auto& p : pairs) {
      const int c = p.positive ? 1 : 0;
      for (std::size_t f = 0; f < FeatureVector::dims; ++f) {
        const double d = p.x[f] - mean[c][f];
        variance[c][f] += d * d;
      }
    }
    for (int c = 0; c < 2; ++c)
      for (std::size_t f = 0; f < FeatureVector::dims; ++f)
        variance[c][f] = std::max(
            variance[c][f] / static_cast<double>(count[c]),
            config.variance_floor);
  }

  double predict(const FeatureVector& x) const {
    std::array<double, 2> score = log_prior;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t f = 0; f < FeatureVector::dims; ++f) {
        const double d = x[f] - mean[c][f];
        score[c] -= 0.5 * (std::log(2.0 * M_PI * variance[c][f]) +
                           d * d / variance[c][f]);
      }
    }
    const double hi = std::max(score[0], score[1]);
    const double z0 = std::exp(score[0] - hi), z1 = std::exp(score[1] - hi);
    return z1 / (z0 + z1);
  }
};

// ---------------------------------------------------------------------------
// Random forest

struct TreeNode {
  std::int16_t feature = -1;  // -1 = leaf
  double threshold = 0.0;
  std::int32_t left = -1;     // feature value <= threshold
  std::int32_t right = -1;
  bool positive_vote = false;  // leaf majority
};

class RandomForest {
 public:
  std::vector<std::vector<TreeNode>> trees;

  void fit(const std::vector<TrainingPair>& pairs, const TrainConfig& config) {
    trees.clear();
    trees.reserve(static_cast<std::size_t>(config.trees));
    for (int t = 0; t < config.trees; ++t) {
      std::mt19937_64 rng(detail::splitmix64(
          config.seed ^ detail::splitmix64(static_cast<std::uint64_t>(t))));
      std::vector<std::uint32_t> sample(pairs.size());
      std::uniform_int_distribution<std::uint32_t> pick(
          0, static_cast<std::uint32_t>(pairs.size()) - 1);
      for (auto& s : sample) s = pick(rng);
      std::vector<TreeNode> tree;
      grow(tree, pairs, std::move(sample), 0, config, rng);
      trees.push_back(std::move(tree));
    }
  }

  // Fraction of trees whose leaf votes positive.
  double predict(const FeatureVector& x) const {
    if (trees.empty()) return 0.0;
    std::size_t votes = 0;
    for (const auto& tree : trees) {
      std::int32_t node = 0;
      while (tree[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& n = tree[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                     : n.right;
      }
      if (tree[static_cast<std::size_t>(node)].positive_vote) ++votes;
    }
    return static_cast<double>(votes) / static_cast<double>(trees.size());
  }

 private:
  static std::int32_t grow(std::vector<TreeNode>& tree,
                           const std::vector<TrainingPair>& pairs,
                           std::vector<std::uint32_t> sample, int depth,
                           const TrainConfig& config, std::mt19937_64& rng) {
    const auto node_index = static_cast<std::int32_t>(tree.size());
    tree.emplace_back();

    std::size_t positives = 0;
    for (const auto i : sample) positives += pairs[i].positive ? 1 : 0;
    const bool pure = positives == 0 || positives == sample.size();
    const bool depth_capped = config.max_depth > 0 && depth >= config.max_depth;
    if (pure || depth_capped ||
        sample.size() < 2 * static_cast<std::size_t>(config.min_leaf)) {
      tree[static_cast<std::size_t>(node_index)].positive_vote =
          2 * positives > sample.size();
      return node_index;
    }

    // mtry features without replacement, then the best Gini split
    std::array<std::size_t, FeatureVector::dims> order{0, 1, 2};
    for (std::size_t f = FeatureVector::dims; f > 1; --f) {
      std::uniform_int_distribution<std::size_t> pick(0, f - 1);
      std::swap(order[f - 1], order[pick(rng)]);
    }
    const auto mtry = std::min<std::size_t>(
        std::max(config.mtry, 1), FeatureVector::dims);

    double best_score = -1.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    std::vector<std::pair<double, bool>> values(sample.size());
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const std::size_t f = order[fi];
      for (std::size_t i = 0; i < sample.size(); ++i)
        values[i] = {pairs[sample[i]].x[f], pairs[sample[i]].positive};
      std::sort(values.begin(), values.end());
      std::size_t left_n = 0, left_pos = 0;
      const auto total_n = values.size();
      for (std::size_t i = 0; i + 1 < total_n; ++i) {
        ++left_n;
        left_pos += values[i].second ? 1 : 0;
        if (values[i].first == values[i + 1].first) continue;
        if (left_n < static_cast<std::size_t>(config.min_leaf) ||
            total_n - left_n < static_cast<std::size_t>(config.min_leaf))
          continue;
        const double lp = static_cast<double>(left_pos) / left_n;
        const std::size_t right_n = total_n - left_n;
        const double rp =
            static_cast<double>(positives - left_pos) / right_n;
        const double gini_left = 2.0 * lp * (1.0 - lp);
        const double gini_right = 2.0 * rp * (1.0 - rp);
        // negated weighted child impurity; higher is better
        const double score = -(left_n * gini_left + right_n * gini_right) /
                             static_cast<double>(total_n);
        if (score > best_score + 1e-15) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (values[i].first + values[i + 1].first);
        }
      }
    }
    if (best_score < 0.0) {  // no valid split
      tree[static_cast<std::size_t>(node_index)].positive_vote =
          2 * positives > sample.size();
      return node_index;
    }

    std::vector<std::uint32_t> left, right;
    for (const auto i : sample)
      (pairs[i].x[best_feature] <= best_threshold ? left : right).push_back(i);
    tree[static_cast<std::size_t>(node_index)].feature =
        static_cast<std::int16_t>(best_feature);
    tree[static_cast<std::size_t>(node_index)].threshold = best_threshold;
    const auto l = grow(tree, pairs, std::move(left), depth + 1, config, rng);
    tree[static_cast<std::size_t>(node_index)].left = l;
    const auto r = grow(tree, pairs, std::move(right), depth + 1, config, rng);
    tree[static_cast<std::size_t>(node_index)].right = r;
    return node_index;
  }
};

// ---------------------------------------------------------------------------
// Unified model

class ClassifierModel {
 public:
  ModelKind kind = ModelKind::logistic_regression;
  TrainConfig config;
  double hac_threshold = 0.5;  // filled in by threshold selection
  LogisticRegression lr;
  GaussianNaiveBayes nb;
  RandomForest rf;

  static ClassifierModel train(ModelKind kind,
                               const std::vector<TrainingPair>& pairs,
                               const TrainConfig& config) {
    std::size_t positives = 0;
    for (const auto& p : pairs) positives += p.positive ? 1 : 0;
    if (positives == 0 || positives == pairs.size())
      throw std::invalid_argument(
          "training data must contain both positive and negative pairs (" +
          std::to_string(positives) + "/" + std::to_string(pairs.size()) +
          " positive)");
    ClassifierModel model;
    model.kind = kind;
    model.config = config;
    switch (kind) {
      case ModelKind::logistic_regression: model.lr.fit(pairs, config); break;
      case ModelKind::gaussian_naive_bayes: model.nb.fit(pairs, config); break;
      case ModelKind::random_forest: model.rf.fit(pairs, config); break;
    }
    return model;
  }

  double predict(const FeatureVector& x) const {
    switch (kind) {
      case ModelKind::logistic_regression: return lr.predict(x);
      case ModelKind::gaussian_naive_bayes: return nb.predict(x);
      case ModelKind::random_forest: return rf.predict(x);
    }
    return 0.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kind"] = to_string(kind);
    doc["seed"] = config.seed;
    doc["hac_threshold"] = hac_threshold;
    doc["config"] = {{"l2", config.l2},
                     {"tol", config.tol},
                     {"max_iters", config.max_iters},
                     {"trees", config.trees},
                     {"max_depth", config.max_depth},
                     {"min_leaf", config.min_leaf},
                     {"mtry", config.mtry},
                     {"variance_floor", config.variance_floor}};
    switch (kind) {
      case ModelKind::logistic_regression:
        doc["params"] = {{"weights", lr.weights}, {"bias", lr.bias}};
        break;
      case ModelKind::gaussian_naive_bayes:
        doc["params"] = {{"log_prior", nb.log_prior},
                         {"mean", nb.mean},
                         {"variance", nb.variance}};
        break;
      case ModelKind::random_forest: {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& tree : rf.trees) {
          nlohmann::json nodes = nlohmann::json::array();
          for (const auto& n : tree)
            nodes.push_back({n.feature, n.threshold, n.left, n.right,
                             n.positive_vote});
          trees.push_back(std::move(nodes));
        }
        doc["params"] = {{"trees", std::move(trees)}};
        break;
      }
    }
    return doc;
  }

  static ClassifierModel from_json(const nlohmann::json& doc) {
    if (doc.value("format_version", 0) != 1)
      throw std::runtime_error("unsupported model format version");
    ClassifierModel model;
    model.kind = model_kind_from_string(doc.at("kind").get<std::string>());
    model.config.seed = doc.value("seed", std::uint64_t{0});
    model.hac_threshold = doc.value("hac_threshold", 0.5);
    if (doc.contains("config")) {
      const auto& c = doc["config"];
      model.config.l2 = c.value("l2", 1.0);
      model.config.tol = c.value("tol", 1e-6);
      model.config.max_iters = c.value("max_iters", 10000);
      model.config.trees = c.value("trees", 500);
      model.config.max_depth = c.value("max_depth", 0);
      model.config.min_leaf = c.value("min_leaf", 1);
      model.config.mtry = c.value("mtry", 2);
      model.config.variance_floor = c.value("variance_floor", 1e-9);
    }
    const auto& params = doc.at("params");
    switch (model.kind) {
      case ModelKind::logistic_regression:
        model.lr.weights = params.at("weights");
        model.lr.bias = params.at("bias");
        break;
      case ModelKind::gaussian_naive_bayes:
        model.nb.log_prior = params.at("log_prior");
        model.nb.mean = params.at("mean");
        model.nb.variance = params.at("variance");
        break;
      case ModelKind::random_forest:
        for (const auto& nodes : params.at("trees")) {
          std::vector<TreeNode> tree;
          for (const auto& n : nodes) {
            TreeNode node;
            node.feature = n[0];
            node.threshold = n[1];
            node.left = n[2];
            node.right = n[3];
            node.positive_vote = n[4];
            tree.push_back(node);
          }
          model.rf.trees.push_back(std::move(tree));
        }
        break;
    }
    return model;
  }
};

}  // namespace namelab
