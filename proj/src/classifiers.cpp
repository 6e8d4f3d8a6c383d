#include "confmu/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace confmu {

namespace {

constexpr double kVarSmoothing = 1e-9;

void check_training_input(const Matrix& X, const std::vector<int>& y,
                          std::size_t n_classes) {
  if (X.rows == 0) throw std::invalid_argument("fit: empty training set");
  if (X.rows != y.size()) throw std::invalid_argument("fit: X/y size mismatch");
  if (n_classes == 0) throw std::invalid_argument("fit: n_classes must be positive");
  std::vector<std::size_t> counts(n_classes, 0);
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
      throw std::invalid_argument("fit: label out of range");
    counts[label]++;
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0)
      throw std::runtime_error("fit: class " + std::to_string(c) +
                               " has zero training instances");
  }
}

class GaussianNbModel final : public ScoreModel {
 public:
  GaussianNbModel(const Matrix& X, const std::vector<int>& y, std::size_t n_classes)
      : d_(X.cols), n_classes_(n_classes), mean_(n_classes, X.cols),
        var_(n_classes, X.cols), log_prior_(n_classes) {
    const std::size_t n = X.rows;
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t i = 0; i < n; ++i) {
      counts[y[i]]++;
      for (std::size_t j = 0; j < d_; ++j) mean_(y[i], j) += X(i, j);
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
      log_prior_[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
      for (std::size_t j = 0; j < d_; ++j) mean_(c, j) /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d_; ++j) {
        const double dx = X(i, j) - mean_(y[i], j);
        var_(y[i], j) += dx * dx;
      }
    }
    // smoothing: 1e-9 times the largest per-feature variance over the full
    // training set keeps zero-variance features from producing singular
    // likelihoods
    double max_pooled_var = 0.0;
    for (std::size_t j = 0; j < d_; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += X(i, j);
      m /= static_cast<double>(n);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += (X(i, j) - m) * (X(i, j) - m);
      max_pooled_var = std::max(max_pooled_var, v / static_cast<double>(n));
    }
    double eps = kVarSmoothing * max_pooled_var;
    if (eps <= 0.0) eps = kVarSmoothing;
    for (std::size_t c = 0; c < n_classes; ++c) {
      for (std::size_t j = 0; j < d_; ++j) {
        var_(c, j) = var_(c, j) / static_cast<double>(counts[c]) + eps;
      }
    }
  }

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != d_) throw std::invalid_argument("predict: dimension mismatch");
    constexpr double log_two_pi = 1.8378770664093454835606594728112353;
    std::vector<double> log_post(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c) {
      double ll = log_prior_[c];
      for (std::size_t j = 0; j < d_; ++j) {
        const double dx = x[j] - mean_(c, j);
        ll -= 0.5 * (log_two_pi + std::log(var_(c, j)) + dx * dx / var_(c, j));
      }
      log_post[c] = ll;
    }
    // max-shifted exponential avoids underflow before normalizing
    const double shift = *std::max_element(log_post.begin(), log_post.end());
    double total = 0.0;
    for (double& v : log_post) {
      v = std::exp(v - shift);
      total += v;
    }
    for (double& v : log_post) v /= total;
    return log_post;
  }

  std::size_t n_classes() const override { return n_classes_; }
  std::size_t n_features() const override { return d_; }

 private:
  std::size_t d_;
  std::size_t n_classes_;
  Matrix mean_;
  Matrix var_;
  std::vector<double> log_prior_;
};

class KnnModel final : public ScoreModel {
 public:
  KnnModel(const Matrix& X, const std::vector<int>& y, std::size_t n_classes,
           std::size_t k)
      : X_(X), y_(y), n_classes_(n_classes), k_(k) {
    if (k_ < 1) throw std::invalid_argument("knn: k must be >= 1");
  }

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != X_.cols) throw std::invalid_argument("predict: dimension mismatch");
    const std::size_t n = X_.rows;
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = X_.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double dx = row[j] - x[j];
        acc += dx * dx;
      }
      dist[i] = {acc, i};
    }
    const std::size_t k = std::min(k_, n);
    // ties in distance resolve to the earlier training row
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<double> scores(n_classes_, 0.0);
    for (std::size_t i = 0; i < k; ++i) scores[y_[dist[i].second]] += 1.0;
    for (double& s : scores) s /= static_cast<double>(k);
    return scores;
  }

  std::size_t n_classes() const override { return n_classes_; }
  std::size_t n_features() const override { return X_.cols; }

 private:
  Matrix X_;
  std::vector<int> y_;
  std::size_t n_classes_;
  std::size_t k_;
};

}  // namespace

ClassifierKind classifier_from_name(const std::string& name) {
  if (name == "gnb") return ClassifierKind::GaussianNB;
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "rf") return ClassifierKind::RandomForest;
  throw std::invalid_argument("unknown classifier: " + name);
}

std::string classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::GaussianNB: return "gnb";
    case ClassifierKind::Knn: return "knn";
    case ClassifierKind::RandomForest: return "rf";
  }
  return "?";
}

std::unique_ptr<ScoreModel> fit_classifier(ClassifierKind kind, const Matrix& X,
                                           const std::vector<int>& y,
                                           std::size_t n_classes,
                                           const ClassifierConfig& config,
                                           std::uint64_t seed) {
  check_training_input(X, y, n_classes);
  switch (kind) {
    case ClassifierKind::GaussianNB:
      return std::make_unique<GaussianNbModel>(X, y, n_classes);
    case ClassifierKind::Knn:
      return std::make_unique<KnnModel>(X, y, n_classes, config.knn.k);
    case ClassifierKind::RandomForest:
      return fit_random_forest(X, y, n_classes, config.forest, seed);
  }
  throw std::logic_error("unreachable");
}

int argmax_class(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax_class: empty scores");
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return static_cast<int>(best);
}

}  // namespace confmu
