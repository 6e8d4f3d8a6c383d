#include "confmu/strategies.hpp"

#include <algorithm>
#include <stdexcept>

#include "confmu/rng.hpp"

namespace confmu {

namespace {

// Stream salts. The non-target/target/fit streams are shared between UIM
// and UCM on purpose: with an aligned seed the two strategies must train
// the same model on the same rows and test on the same rows.
constexpr std::uint64_t kMixedSalt = 0x01;
constexpr std::uint64_t kUdmSalt = 0x02;
constexpr std::uint64_t kNonTargetSalt = 0x03;
constexpr std::uint64_t kTargetSalt = 0x04;
constexpr std::uint64_t kFitSalt = 0x05;

std::vector<std::size_t> shuffled_indices(std::vector<std::size_t> indices,
                                          std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(indices);
  return indices;
}

std::vector<std::size_t> all_rows(const MultiUserDataset& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

std::vector<std::size_t> user_rows(const MultiUserDataset& data, int user) {
  if (user < 0 || static_cast<std::size_t>(user) >= data.n_users())
    throw std::invalid_argument("split: unknown user index");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.users[i] == user) rows.push_back(i);
  }
  if (rows.empty()) throw std::invalid_argument("split: user has no rows");
  return rows;
}

void require_nonempty(const SplitIndices& split) {
  if (split.train.empty() || split.calibration.empty() || split.test.empty())
    throw std::runtime_error("split: a partition came out empty");
}

// shuffle, then train = first 60%, test = next 20%, calibration = remainder
SplitIndices split_60_20_20(std::vector<std::size_t> rows, std::uint64_t seed) {
  const std::size_t n = rows.size();
  rows = shuffled_indices(std::move(rows), seed);
  const auto n_train = static_cast<std::size_t>(0.6 * static_cast<double>(n));
  const auto n_test = static_cast<std::size_t>(0.2 * static_cast<double>(n));
  SplitIndices split;
  split.train.assign(rows.begin(), rows.begin() + n_train);
  split.test.assign(rows.begin() + n_train, rows.begin() + n_train + n_test);
  split.calibration.assign(rows.begin() + n_train + n_test, rows.end());
  require_nonempty(split);
  return split;
}

struct UserSplitParts {
  std::vector<std::size_t> non_target;  // shuffled
  std::vector<std::size_t> target;      // shuffled
};

UserSplitParts shuffled_user_parts(const MultiUserDataset& data, int target_user,
                                   std::uint64_t seed) {
  if (data.n_users() < 2)
    throw std::runtime_error("split: strategy needs at least two users");
  auto target = user_rows(data, target_user);
  std::vector<std::size_t> non_target;
  non_target.reserve(data.size() - target.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.users[i] != target_user) non_target.push_back(i);
  }
  UserSplitParts parts;
  parts.non_target = shuffled_indices(std::move(non_target),
                                      mix_seed(seed, kNonTargetSalt, target_user));
  parts.target =
      shuffled_indices(std::move(target), mix_seed(seed, kTargetSalt, target_user));
  return parts;
}

bool train_covers_all_classes(const MultiUserDataset& data,
                              const std::vector<std::size_t>& train) {
  std::vector<bool> seen(data.n_classes(), false);
  std::size_t covered = 0;
  for (std::size_t i : train) {
    if (!seen[data.labels[i]]) {
      seen[data.labels[i]] = true;
      if (++covered == data.n_classes()) return true;
    }
  }
  return covered == data.n_classes();
}

using SplitFn = SplitIndices (*)(const MultiUserDataset&, int, std::uint64_t);

SplitIndices split_with_retries(const MultiUserDataset& data, int user,
                                std::uint64_t seed, SplitFn fn) {
  constexpr int kMaxRetries = 5;
  for (int attempt = 0;; ++attempt) {
    SplitIndices split = fn(data, user, seed + static_cast<std::uint64_t>(attempt));
    if (train_covers_all_classes(data, split.train)) return split;
    if (attempt == kMaxRetries)
      throw std::runtime_error(
          "split: a class is missing from the train part after 5 retries");
  }
}

std::vector<PredictionRecord> evaluate_split(const MultiUserDataset& data,
                                             const SplitIndices& split,
                                             ClassifierKind classifier,
                                             const ClassifierConfig& config,
                                             double epsilon, std::uint64_t fit_seed) {
  const ScaleParams scaler = fit_scaler(data, split.train);
  const Matrix x_train = scale_rows(scaler, data.features, split.train);
  const Matrix x_cal = scale_rows(scaler, data.features, split.calibration);
  const Matrix x_test = scale_rows(scaler, data.features, split.test);
  const std::vector<int> y_train = gather(data.labels, split.train);
  const std::vector<int> y_cal = gather(data.labels, split.calibration);

  std::shared_ptr<const ScoreModel> model =
      fit_classifier(classifier, x_train, y_train, data.n_classes(), config, fit_seed);
  const ConformalModel conformal = calibrate(model, x_cal, y_cal, epsilon);

  std::vector<PredictionRecord> records;
  records.reserve(split.test.size());
  for (std::size_t i = 0; i < split.test.size(); ++i) {
    const std::size_t row = split.test[i];
    records.push_back(
        predict_set(conformal, x_test.row(i), data.labels[row], data.users[row]));
  }
  return records;
}

}  // namespace

StrategyKind strategy_from_name(const std::string& name) {
  if (name == "MM") return StrategyKind::MM;
  if (name == "UDM") return StrategyKind::UDM;
  if (name == "UIM") return StrategyKind::UIM;
  if (name == "UCM") return StrategyKind::UCM;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::MM: return "MM";
    case StrategyKind::UDM: return "UDM";
    case StrategyKind::UIM: return "UIM";
    case StrategyKind::UCM: return "UCM";
  }
  return "?";
}

SplitIndices split_mixed(const MultiUserDataset& data, std::uint64_t seed) {
  return split_60_20_20(all_rows(data), mix_seed(seed, kMixedSalt));
}

SplitIndices split_user_dependent(const MultiUserDataset& data, int user,
                                  std::uint64_t seed) {
  return split_60_20_20(user_rows(data, user), mix_seed(seed, kUdmSalt, user));
}

SplitIndices split_user_independent(const MultiUserDataset& data, int target_user,
                                    std::uint64_t seed) {
  const UserSplitParts parts = shuffled_user_parts(data, target_user, seed);
  const std::size_t m = parts.non_target.size();
  const auto n_train = static_cast<std::size_t>(0.6 * static_cast<double>(m));
  const auto n_test =
      static_cast<std::size_t>(0.5 * static_cast<double>(parts.target.size()));
  SplitIndices split;
  split.train.assign(parts.non_target.begin(), parts.non_target.begin() + n_train);
  split.calibration.assign(parts.non_target.begin() + n_train, parts.non_target.end());
  split.test.assign(parts.target.begin(), parts.target.begin() + n_test);
  // the remaining target rows stay unused so UIM and UCM share a test set
  require_nonempty(split);
  return split;
}

SplitIndices split_user_calibrated(const MultiUserDataset& data, int target_user,
                                   std::uint64_t seed) {
  const UserSplitParts parts = shuffled_user_parts(data, target_user, seed);
  const std::size_t m = parts.non_target.size();
  const auto n_train = static_cast<std::size_t>(0.6 * static_cast<double>(m));
  const auto n_test =
      static_cast<std::size_t>(0.5 * static_cast<double>(parts.target.size()));
  SplitIndices split;
  split.train.assign(parts.non_target.begin(), parts.non_target.begin() + n_train);
  split.test.assign(parts.target.begin(), parts.target.begin() + n_test);
  split.calibration.assign(parts.target.begin() + n_test, parts.target.end());
  require_nonempty(split);
  return split;
}

std::vector<PredictionRecord> run_strategy(const MultiUserDataset& data,
                                           StrategyKind strategy, ClassifierKind classifier,
                                           const ClassifierConfig& config, double epsilon,
                                           std::uint64_t seed) {
  if (strategy == StrategyKind::MM) {
    constexpr int kMaxRetries = 5;
    SplitIndices split;
    for (int attempt = 0;; ++attempt) {
      split = split_mixed(data, seed + static_cast<std::uint64_t>(attempt));
      if (train_covers_all_classes(data, split.train)) break;
      if (attempt == kMaxRetries)
        throw std::runtime_error(
            "split: a class is missing from the train part after 5 retries");
    }
    return evaluate_split(data, split, classifier, config, epsilon,
                          mix_seed(seed, kFitSalt));
  }

  SplitFn fn = nullptr;
  switch (strategy) {
    case StrategyKind::UDM: fn = &split_user_dependent; break;
    case StrategyKind::UIM: fn = &split_user_independent; break;
    case StrategyKind::UCM: fn = &split_user_calibrated; break;
    default: throw std::logic_error("unreachable");
  }

  std::vector<PredictionRecord> pooled;
  for (std::size_t u = 0; u < data.n_users(); ++u) {
    const int user = static_cast<int>(u);
    const SplitIndices split = split_with_retries(data, user, seed, fn);
    // the fit seed only depends on (seed, user), never on the strategy, so
    // UIM and UCM train identical models
    auto records = evaluate_split(data, split, classifier, config, epsilon,
                                  mix_seed(seed, kFitSalt, u));
    pooled.insert(pooled.end(), std::make_move_iterator(records.begin()),
                  std::make_move_iterator(records.end()));
  }
  return pooled;
}

}  // namespace confmu
