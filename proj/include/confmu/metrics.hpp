#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confmu/conformal.hpp"

namespace confmu {

// The full measure suite over one pooled batch of prediction records.
// Non-conformal values are macro-averaged fractions in [0,1]; conformal
// values follow the set-based criteria definitions.
struct MetricsReport {
  double accuracy = 0, sensitivity = 0, specificity = 0;
  double precision = 0, recall = 0, f1 = 0;
  double coverage = 0, jaccard = 0, setsize = 0, pctempty = 0;
  double m_criterion = 0, f_criterion = 0, om = 0, of = 0, ou = 0, oe = 0;
};

// counts[predicted][true]
std::vector<std::vector<std::size_t>> confusion_matrix(
    const std::vector<PredictionRecord>& records, std::size_t n_classes);

// Fills accuracy/sensitivity/specificity/precision/recall/f1. Per-class
// one-vs-rest counts are macro-averaged; a 0/0 class contributes 0 and is
// still counted in the average.
MetricsReport nonconformal_metrics(const std::vector<PredictionRecord>& records,
                                   std::size_t n_classes);

// Fills the ten set-based measures from prediction sets and p-values.
MetricsReport conformal_metrics(const std::vector<PredictionRecord>& records,
                                std::size_t n_classes);

MetricsReport compute_metrics(const std::vector<PredictionRecord>& records,
                              std::size_t n_classes);

// Report table rows, in the fixed output order.
const std::vector<std::string>& metric_table_names();
double metric_value(const MetricsReport& report, const std::string& name);
// Table cells for these metrics are rendered as percentages.
bool metric_reported_as_percent(const std::string& name);

}  // namespace confmu
