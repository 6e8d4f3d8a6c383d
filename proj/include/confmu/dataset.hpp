#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "confmu/matrix.hpp"

namespace confmu {

// Feature matrix plus class/user labelling. The unit every evaluation
// strategy partitions. Immutable after ingestion.
struct MultiUserDataset {
  Matrix features;
  std::vector<int> labels;  // index into class_names, one per row
  std::vector<int> users;   // index into user_names, one per row
  std::vector<std::string> class_names;
  std::vector<std::string> user_names;
  std::vector<std::string> feature_names;

  std::size_t size() const { return features.rows; }
  std::size_t n_features() const { return features.cols; }
  std::size_t n_classes() const { return class_names.size(); }
  std::size_t n_users() const { return user_names.size(); }
};

// Per-feature min/max, learned from training rows only.
struct ScaleParams {
  std::vector<double> min;
  std::vector<double> max;
};

// Row indices of one train/calibration/test partition. Parts are pairwise
// disjoint; train and test are never empty.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> calibration;
  std::vector<std::size_t> test;
};

ScaleParams fit_scaler(const MultiUserDataset& data, std::span<const std::size_t> rows);

// (x - min) / (max - min) per feature; a constant feature maps to 0.
// Outputs are intentionally not clamped, so out-of-range test values
// extrapolate linearly.
std::vector<double> apply_scaler(const ScaleParams& params, std::span<const double> x);

// Gathers the given rows of `features` and scales them in one pass.
Matrix scale_rows(const ScaleParams& params, const Matrix& features,
                  std::span<const std::size_t> rows);

// Checks the structural invariants (consistent sizes, finite values, index
// ranges). Throws std::runtime_error on violation.
void validate_dataset(const MultiUserDataset& data);

}  // namespace confmu
