#pragma once

#include <cstdint>

#include "confmu/dataset.hpp"

namespace confmu {

// Seeded multi-user generator: per-class Gaussian clusters shared by all
// users, shifted per user by a random offset of norm `user_shift`. With
// user_shift = 0 all users are exchangeable; growing the shift breaks the
// exchangeability between users that the conformal guarantee relies on.
struct SynthConfig {
  std::size_t n_users = 3;
  std::size_t n_classes = 4;
  std::size_t per_user_per_class = 40;
  std::size_t dims = 3;
  double user_shift = 0.0;
  double noise = 0.5;
  std::uint64_t seed = 1;
};

MultiUserDataset generate_synthetic(const SynthConfig& config);

}  // namespace confmu
