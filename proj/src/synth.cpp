#include "confmu/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "confmu/rng.hpp"

namespace confmu {

MultiUserDataset generate_synthetic(const SynthConfig& config) {
  if (config.n_users < 1 || config.n_classes < 1 || config.per_user_per_class < 1 ||
      config.dims < 1)
    throw std::invalid_argument("synth: all counts must be >= 1");
  if (!(config.noise > 0.0)) throw std::invalid_argument("synth: noise must be > 0");
  if (config.user_shift < 0.0)
    throw std::invalid_argument("synth: user_shift must be >= 0");

  Rng rng(config.seed);

  // Class centers drawn uniformly in a box, rejected until pairwise
  // separation of at least 4x the noise holds.
  const double min_gap = 4.0 * config.noise;
  const double box = min_gap * static_cast<double>(config.n_classes + 1);
  Matrix centers(config.n_classes, config.dims);
  for (std::size_t c = 0; c < config.n_classes; ++c) {
    int rejections = 0;
    while (true) {
      for (std::size_t j = 0; j < config.dims; ++j)
        centers(c, j) = rng.uniform01() * box;
      bool separated = true;
      for (std::size_t o = 0; o < c && separated; ++o) {
        double dist2 = 0.0;
        for (std::size_t j = 0; j < config.dims; ++j) {
          const double dx = centers(c, j) - centers(o, j);
          dist2 += dx * dx;
        }
        separated = dist2 >= min_gap * min_gap;
      }
      if (separated) break;
      if (++rejections > 1000)
        throw std::runtime_error("synth: center placement failed after 1000 rejections");
    }
  }

  // Per-user offset: random direction scaled to norm user_shift.
  Matrix offsets(config.n_users, config.dims);
  for (std::size_t u = 0; u < config.n_users; ++u) {
    if (config.user_shift == 0.0) continue;
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t j = 0; j < config.dims; ++j) {
        offsets(u, j) = rng.normal();
        norm2 += offsets(u, j) * offsets(u, j);
      }
    } while (norm2 == 0.0);
    const double scale = config.user_shift / std::sqrt(norm2);
    for (std::size_t j = 0; j < config.dims; ++j) offsets(u, j) *= scale;
  }

  const std::size_t n =
      config.n_users * config.n_classes * config.per_user_per_class;
  MultiUserDataset data;
  data.features = Matrix(n, config.dims);
  data.labels.reserve(n);
  data.users.reserve(n);
  std::size_t row = 0;
  for (std::size_t u = 0; u < config.n_users; ++u) {
    for (std::size_t c = 0; c < config.n_classes; ++c) {
      for (std::size_t i = 0; i < config.per_user_per_class; ++i, ++row) {
        for (std::size_t j = 0; j < config.dims; ++j) {
          data.features(row, j) =
              centers(c, j) + offsets(u, j) + config.noise * rng.normal();
        }
        data.labels.push_back(static_cast<int>(c));
        data.users.push_back(static_cast<int>(u));
      }
    }
  }

  for (std::size_t c = 0; c < config.n_classes; ++c)
    data.class_names.push_back("c" + std::to_string(c));
  for (std::size_t u = 0; u < config.n_users; ++u)
    data.user_names.push_back("u" + std::to_string(u));
  for (std::size_t j = 0; j < config.dims; ++j)
    data.feature_names.push_back("f" + std::to_string(j));
  return data;
}

}  // namespace confmu
