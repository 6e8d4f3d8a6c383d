#include "confmu/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace confmu {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

bool contains(const std::vector<int>& set, int value) {
  return std::find(set.begin(), set.end(), value) != set.end();
}

}  // namespace

std::vector<std::vector<std::size_t>> confusion_matrix(
    const std::vector<PredictionRecord>& records, std::size_t n_classes) {
  if (records.empty()) throw std::invalid_argument("confusion_matrix: no records");
  std::vector<std::vector<std::size_t>> counts(n_classes,
                                               std::vector<std::size_t>(n_classes, 0));
  for (const auto& r : records) counts[r.point][r.truth]++;
  return counts;
}

MetricsReport nonconformal_metrics(const std::vector<PredictionRecord>& records,
                                   std::size_t n_classes) {
  const auto cm = confusion_matrix(records, n_classes);
  const double k = static_cast<double>(records.size());

  MetricsReport report;
  double correct = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) correct += static_cast<double>(cm[c][c]);
  report.accuracy = correct / k;

  for (std::size_t c = 0; c < n_classes; ++c) {
    double tp = static_cast<double>(cm[c][c]);
    double fp = 0.0, fn = 0.0;
    for (std::size_t o = 0; o < n_classes; ++o) {
      if (o == c) continue;
      fp += static_cast<double>(cm[c][o]);
      fn += static_cast<double>(cm[o][c]);
    }
    const double tn = k - tp - fp - fn;
    const double sens = ratio(tp, tp + fn);
    const double spec = ratio(tn, tn + fp);
    const double prec = ratio(tp, tp + fp);
    const double f1 = ratio(2.0 * prec * sens, prec + sens);
    report.sensitivity += sens;
    report.specificity += spec;
    report.precision += prec;
    report.recall += sens;
    report.f1 += f1;
  }
  const double nc = static_cast<double>(n_classes);
  report.sensitivity /= nc;
  report.specificity /= nc;
  report.precision /= nc;
  report.recall /= nc;
  report.f1 /= nc;
  return report;
}

MetricsReport conformal_metrics(const std::vector<PredictionRecord>& records,
                                std::size_t n_classes) {
  if (records.empty()) throw std::invalid_argument("conformal_metrics: no records");
  const double k = static_cast<double>(records.size());

  MetricsReport report;
  double covered = 0, empty = 0, multi = 0, om_hits = 0, excess = 0;
  double jaccard = 0, fuzz = 0, obs_fuzz = 0, unconf = 0;
  for (const auto& r : records) {
    if (r.p_values.size() != n_classes)
      throw std::invalid_argument("conformal_metrics: p-value vector size mismatch");
    const bool has_truth = contains(r.set, r.truth);
    const auto false_in_set = static_cast<double>(r.set.size()) - (has_truth ? 1.0 : 0.0);
    covered += has_truth ? 1.0 : 0.0;
    empty += r.set.empty() ? 1.0 : 0.0;
    multi += r.set.size() > 1 ? 1.0 : 0.0;
    om_hits += false_in_set > 0.0 ? 1.0 : 0.0;
    excess += false_in_set;
    // |set ∩ {truth}| / |set ∪ {truth}|; an empty set scores 0
    jaccard += has_truth
                   ? 1.0 / static_cast<double>(r.set.size())
                   : 0.0;

    double p_sum = 0.0, p_max = 0.0, p_false_sum = 0.0, p_false_max = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double p = r.p_values[c];
      p_sum += p;
      p_max = std::max(p_max, p);
      if (static_cast<int>(c) != r.truth) {
        p_false_sum += p;
        p_false_max = std::max(p_false_max, p);
      }
    }
    fuzz += p_sum - p_max;
    obs_fuzz += p_false_sum;
    unconf += p_false_max;
  }

  report.coverage = covered / k;
  report.pctempty = empty / k;
  report.m_criterion = multi / k;
  report.f_criterion = fuzz / k;
  report.jaccard = jaccard / k;
  report.om = om_hits / k;
  report.of = obs_fuzz / k;
  report.ou = unconf / k;
  report.oe = excess / k;
  // |set| = 1{truth in set} + |set \ {truth}| per record, so the average set
  // size is derived from the other two to keep the identity exact
  report.setsize = report.coverage + report.oe;
  return report;
}

MetricsReport compute_metrics(const std::vector<PredictionRecord>& records,
                              std::size_t n_classes) {
  MetricsReport report = conformal_metrics(records, n_classes);
  const MetricsReport nc = nonconformal_metrics(records, n_classes);
  report.accuracy = nc.accuracy;
  report.sensitivity = nc.sensitivity;
  report.specificity = nc.specificity;
  report.precision = nc.precision;
  report.recall = nc.recall;
  report.f1 = nc.f1;
  return report;
}

const std::vector<std::string>& metric_table_names() {
  static const std::vector<std::string> names = {
      "accuracy", "sensitivity", "specificity", "F1",
      "coverage", "jaccard",     "setsize",     "pctempty",
      "MCriterion", "FCriterion", "OM",         "OF",
      "OU",       "OE"};
  return names;
}

double metric_value(const MetricsReport& r, const std::string& name) {
  if (name == "accuracy") return r.accuracy;
  if (name == "sensitivity") return r.sensitivity;
  if (name == "specificity") return r.specificity;
  if (name == "precision") return r.precision;
  if (name == "recall") return r.recall;
  if (name == "F1") return r.f1;
  if (name == "coverage") return r.coverage;
  if (name == "jaccard") return r.jaccard;
  if (name == "setsize") return r.setsize;
  if (name == "pctempty") return r.pctempty;
  if (name == "MCriterion") return r.m_criterion;
  if (name == "FCriterion") return r.f_criterion;
  if (name == "OM") return r.om;
  if (name == "OF") return r.of;
  if (name == "OU") return r.ou;
  if (name == "OE") return r.oe;
  throw std::invalid_argument("unknown metric: " + name);
}

bool metric_reported_as_percent(const std::string& name) {
  return name == "accuracy" || name == "sensitivity" || name == "specificity" ||
         name == "F1" || name == "coverage" || name == "pctempty";
}

}  // namespace confmu
