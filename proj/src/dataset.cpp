#include "confmu/dataset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace confmu {

ScaleParams fit_scaler(const MultiUserDataset& data, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("fit_scaler: empty row list");
  const std::size_t d = data.n_features();
  ScaleParams params;
  params.min.assign(d, std::numeric_limits<double>::infinity());
  params.max.assign(d, -std::numeric_limits<double>::infinity());
  for (std::size_t r : rows) {
    if (r >= data.size()) throw std::out_of_range("fit_scaler: row index out of range");
    auto row = data.features.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      params.min[j] = std::min(params.min[j], row[j]);
      params.max[j] = std::max(params.max[j], row[j]);
    }
  }
  return params;
}

std::vector<double> apply_scaler(const ScaleParams& params, std::span<const double> x) {
  if (x.size() != params.min.size())
    throw std::invalid_argument("apply_scaler: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double range = params.max[j] - params.min[j];
    out[j] = range > 0.0 ? (x[j] - params.min[j]) / range : 0.0;
  }
  return out;
}

Matrix scale_rows(const ScaleParams& params, const Matrix& features,
                  std::span<const std::size_t> rows) {
  if (features.cols != params.min.size())
    throw std::invalid_argument("scale_rows: dimension mismatch");
  Matrix out(rows.size(), features.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = features.row(rows[i]);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < features.cols; ++j) {
      const double range = params.max[j] - params.min[j];
      dst[j] = range > 0.0 ? (src[j] - params.min[j]) / range : 0.0;
    }
  }
  return out;
}

void validate_dataset(const MultiUserDataset& data) {
  const std::size_t n = data.size();
  if (data.labels.size() != n || data.users.size() != n)
    throw std::runtime_error("dataset: label/user count does not match row count");
  if (data.feature_names.size() != data.n_features())
    throw std::runtime_error("dataset: feature name count does not match column count");
  for (double v : data.features.data) {
    if (!std::isfinite(v)) throw std::runtime_error("dataset: non-finite feature value");
  }
  for (int c : data.labels) {
    if (c < 0 || static_cast<std::size_t>(c) >= data.n_classes())
      throw std::runtime_error("dataset: class index out of range");
  }
  for (int u : data.users) {
    if (u < 0 || static_cast<std::size_t>(u) >= data.n_users())
      throw std::runtime_error("dataset: user index out of range");
  }
}

}  // namespace confmu
