#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confmu/conformal.hpp"
#include "confmu/dataset.hpp"

namespace confmu {

// The four evaluation strategies, differing in which users supply the
// train, calibration, and test rows.
enum class StrategyKind { MM, UDM, UIM, UCM };

StrategyKind strategy_from_name(const std::string& name);
std::string strategy_name(StrategyKind kind);

// 60/20/20 split over all rows, users ignored.
SplitIndices split_mixed(const MultiUserDataset& data, std::uint64_t seed);

// 60/20/20 split restricted to one user's rows.
SplitIndices split_user_dependent(const MultiUserDataset& data, int user,
                                  std::uint64_t seed);

// Train 60% / calibration 40% of every other user's rows; test is the first
// half of the target user's rows (the other half is discarded).
SplitIndices split_user_independent(const MultiUserDataset& data, int target_user,
                                    std::uint64_t seed);

// Same train rows as split_user_independent under the same seed; the target
// user's discarded half becomes the calibration set instead.
SplitIndices split_user_calibrated(const MultiUserDataset& data, int target_user,
                                   std::uint64_t seed);

// Runs one repetition of a strategy end to end: split (per user for
// UDM/UIM/UCM), 0-1 scaling fitted on the train rows only, classifier fit,
// conformal calibration, and prediction on every test row. Splits leaving a
// class out of the train part are redrawn with seed+1.. up to 5 times.
std::vector<PredictionRecord> run_strategy(const MultiUserDataset& data,
                                           StrategyKind strategy, ClassifierKind classifier,
                                           const ClassifierConfig& config, double epsilon,
                                           std::uint64_t seed);

}  // namespace confmu
