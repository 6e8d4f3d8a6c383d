#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confmu/matrix.hpp"

namespace confmu {

enum class ClassifierKind { GaussianNB, Knn, RandomForest };

ClassifierKind classifier_from_name(const std::string& name);  // gnb | knn | rf
std::string classifier_name(ClassifierKind kind);

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  // unset = unlimited
  std::size_t min_samples_split = 2;
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(n_features))
};

struct KnnConfig {
  std::size_t k = 5;
};

struct ClassifierConfig {
  ForestConfig forest;
  KnnConfig knn;
};

// Trained classifier producing a per-class score vector in [0,1] that sums
// to 1 for every input. Immutable once fitted; safe to share across threads.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;
  virtual std::vector<double> predict_scores(std::span<const double> x) const = 0;
  virtual std::size_t n_classes() const = 0;
  virtual std::size_t n_features() const = 0;
};

// Fits one of the three algorithms. Every class in [0, n_classes) must have
// at least one training instance; the strategy layer guarantees this.
std::unique_ptr<ScoreModel> fit_classifier(ClassifierKind kind, const Matrix& X,
                                           const std::vector<int>& y,
                                           std::size_t n_classes,
                                           const ClassifierConfig& config,
                                           std::uint64_t seed);

// argmax with lowest-class-index tie break
int argmax_class(std::span<const double> scores);

// internal: forest factory lives in forest.cpp
std::unique_ptr<ScoreModel> fit_random_forest(const Matrix& X, const std::vector<int>& y,
                                              std::size_t n_classes,
                                              const ForestConfig& config,
                                              std::uint64_t seed);

}  // namespace confmu
