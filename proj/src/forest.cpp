#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "confmu/classifiers.hpp"
#include "confmu/rng.hpp"

namespace confmu {

namespace {

constexpr std::uint64_t kTreeSalt = 0x7265;

struct TreeNode {
  int feature = -1;          // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<double> leaf;  // class frequencies at the leaf
};

struct Tree {
  std::vector<TreeNode> nodes;

  std::span<const double> predict(std::span<const double> x) const {
    int idx = 0;
    while (nodes[idx].feature >= 0) {
      idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                          : nodes[idx].right;
    }
    return nodes[idx].leaf;
  }
};

double gini(std::span<const std::size_t> counts, std::size_t total) {
  double g = 1.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const std::vector<int>& y, std::size_t n_classes,
              const ForestConfig& config, std::uint64_t seed)
      : X_(X), y_(y), n_classes_(n_classes), config_(config), rng_(seed) {
    m_try_ = config.features_per_split > 0
                 ? std::min(config.features_per_split, X.cols)
                 : static_cast<std::size_t>(
                       std::ceil(std::sqrt(static_cast<double>(X.cols))));
  }

  Tree build() {
    const std::size_t n = X_.rows;
    std::vector<std::size_t> sample(n);
    for (std::size_t i = 0; i < n; ++i) sample[i] = rng_.below(n);  // bootstrap, size n
    Tree tree;
    grow(tree, sample, 0);
    return tree;
  }

 private:
  int grow(Tree& tree, std::vector<std::size_t>& indices, std::size_t depth) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    std::vector<std::size_t> counts(n_classes_, 0);
    for (std::size_t i : indices) counts[y_[i]]++;
    const std::size_t n = indices.size();

    const bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) ==
                      static_cast<long>(n_classes_) - 1;
    const bool depth_capped = config_.max_depth && depth >= *config_.max_depth;
    if (pure || n < config_.min_samples_split || depth_capped) {
      make_leaf(tree.nodes[node_id], counts, n);
      return node_id;
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    auto candidates = sample_features();
    std::vector<std::pair<double, std::size_t>> values(n);
    std::vector<std::size_t> left_counts(n_classes_);
    for (std::size_t f : candidates) {
      for (std::size_t i = 0; i < n; ++i) values[i] = {X_(indices[i], f), indices[i]};
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::fill(left_counts.begin(), left_counts.end(), 0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_counts[y_[values[i].second]]++;
        if (values[i + 1].first <= values[i].first) continue;  // no gap to split in
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        std::vector<std::size_t> right_counts(n_classes_);
        for (std::size_t c = 0; c < n_classes_; ++c)
          right_counts[c] = counts[c] - left_counts[c];
        const double impurity =
            (static_cast<double>(n_left) * gini(left_counts, n_left) +
             static_cast<double>(n_right) * gini(right_counts, n_right)) /
            static_cast<double>(n);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (values[i].first + values[i + 1].first);
        }
      }
    }

    if (best_feature < 0) {  // all candidate features constant on this node
      make_leaf(tree.nodes[node_id], counts, n);
      return node_id;
    }

    std::vector<std::size_t> left_idx, right_idx;
    left_idx.reserve(n);
    right_idx.reserve(n);
    for (std::size_t i : indices) {
      (X_(i, best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    tree.nodes[node_id].feature = best_feature;
    tree.nodes[node_id].threshold = best_threshold;
    const int left = grow(tree, left_idx, depth + 1);
    tree.nodes[node_id].left = left;
    const int right = grow(tree, right_idx, depth + 1);
    tree.nodes[node_id].right = right;
    return node_id;
  }

  void make_leaf(TreeNode& node, std::span<const std::size_t> counts, std::size_t n) {
    node.leaf.resize(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c)
      node.leaf[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
  }

  // partial Fisher-Yates draw of m_try_ distinct feature indices
  std::vector<std::size_t> sample_features() {
    std::vector<std::size_t> all(X_.cols);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < m_try_; ++i) {
      const std::size_t j = i + rng_.below(all.size() - i);
      std::swap(all[i], all[j]);
    }
    all.resize(m_try_);
    return all;
  }

  const Matrix& X_;
  const std::vector<int>& y_;
  std::size_t n_classes_;
  const ForestConfig& config_;
  Rng rng_;
  std::size_t m_try_ = 1;
};

class RandomForestModel final : public ScoreModel {
 public:
  RandomForestModel(const Matrix& X, const std::vector<int>& y, std::size_t n_classes,
                    const ForestConfig& config, std::uint64_t seed)
      : d_(X.cols), n_classes_(n_classes) {
    if (config.n_trees < 1) throw std::invalid_argument("rf: n_trees must be >= 1");
    trees_.reserve(config.n_trees);
    for (std::size_t t = 0; t < config.n_trees; ++t) {
      // each tree's stream comes from (seed, tree index), never from
      // scheduling order
      TreeBuilder builder(X, y, n_classes, config, mix_seed(seed, kTreeSalt, t));
      trees_.push_back(builder.build());
    }
  }

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != d_) throw std::invalid_argument("predict: dimension mismatch");
    std::vector<double> scores(n_classes_, 0.0);
    for (const Tree& tree : trees_) {
      auto leaf = tree.predict(x);
      for (std::size_t c = 0; c < n_classes_; ++c) scores[c] += leaf[c];
    }
    for (double& s : scores) s /= static_cast<double>(trees_.size());
    return scores;
  }

  std::size_t n_classes() const override { return n_classes_; }
  std::size_t n_features() const override { return d_; }

 private:
  std::size_t d_;
  std::size_t n_classes_;
  std::vector<Tree> trees_;
};

}  // namespace

std::unique_ptr<ScoreModel> fit_random_forest(const Matrix& X, const std::vector<int>& y,
                                              std::size_t n_classes,
                                              const ForestConfig& config,
                                              std::uint64_t seed) {
  return std::make_unique<RandomForestModel>(X, y, n_classes, config, seed);
}

}  // namespace confmu
