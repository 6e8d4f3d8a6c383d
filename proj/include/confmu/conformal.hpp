#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "confmu/classifiers.hpp"

namespace confmu {

// Per test instance: the conformal prediction set, per-class p-values, the
// plain argmax prediction, and the ground truth/user context.
struct PredictionRecord {
  std::vector<int> set;  // ascending class indices; may be empty
  std::vector<double> p_values;
  int point = -1;
  int truth = -1;
  int user = -1;
};

// Split-conformal wrapper around a fitted ScoreModel.
struct ConformalModel {
  std::shared_ptr<const ScoreModel> base;
  std::vector<double> cal_scores;  // nonconformity values, ascending
  double epsilon = 0.05;
  double q_hat = 1.0;
};

// LAC nonconformity: one minus the score of the label.
double nonconformity(double score);

// Scores the calibration set, sorts the nonconformity values, and fixes the
// threshold at the m-th smallest with m = ceil((n+1)(1-epsilon)); when m
// exceeds n the threshold clamps to 1 so sets are never pruned below the
// guarantee.
ConformalModel calibrate(std::shared_ptr<const ScoreModel> base, const Matrix& X_cal,
                         const std::vector<int>& y_cal, double epsilon);

PredictionRecord predict_set(const ConformalModel& model, std::span<const double> x,
                             int truth = -1, int user = -1);

// p = (|{j : cal_j >= alpha}| + 1) / (n_cal + 1), ties counted inclusively.
double p_value_from_alpha(const ConformalModel& model, double alpha);
double p_value(const ConformalModel& model, std::span<const double> x, int class_index);

// PredictionRecord log CSV: user,truth,point,set,p_<class>... with names
// resolved through the vocabularies; the set column joins names with ';'.
void write_records_csv(const std::string& path,
                       const std::vector<PredictionRecord>& records,
                       const std::vector<std::string>& class_names,
                       const std::vector<std::string>& user_names);

struct RecordsFile {
  std::vector<PredictionRecord> records;
  std::vector<std::string> class_names;
  std::vector<std::string> user_names;
};

RecordsFile read_records_csv(const std::string& path);

}  // namespace confmu
