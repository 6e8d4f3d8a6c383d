#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confmu/classifiers.hpp"
#include "confmu/dataset.hpp"
#include "confmu/dataset_io.hpp"
#include "confmu/strategies.hpp"
#include "confmu/synth.hpp"

namespace confmu {

struct DatasetSpec {
  std::string name;
  std::string path;                  // empty when synthetic
  std::string format = "preprocessed";  // preprocessed | raw-stream
  RawStreamOptions raw;
  std::optional<SynthConfig> synth;
};

struct ClassifierSpec {
  std::string label;  // table column header
  ClassifierKind kind = ClassifierKind::GaussianNB;
  ClassifierConfig config;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<ClassifierSpec> classifiers;
  std::vector<StrategyKind> strategies;
  double epsilon = 0.05;
  std::size_t repetitions = 20;
  std::uint64_t base_seed = 1;
  bool viz = true;
  std::size_t max_sets = 20;
  std::string output_dir = "runs/out";
};

ExperimentConfig load_experiment_config(const std::string& path);

// Runs the dataset x classifier x strategy grid with `repetitions` seeded
// repetitions per cell, emitting per-strategy mean+-std tables, the chart
// files for repetition 0, coverage boxplots, set-size lolliplots, and the
// hypothesis-test report. Re-runs skip cells whose recorded content hash
// still matches.
void run_experiment(const ExperimentConfig& config);

MultiUserDataset load_dataset(const DatasetSpec& spec);

// Recomputes hypotheses.json from the per-cell metrics stored in a run dir.
void write_hypotheses_report(const std::string& run_dir);

// Per-repetition metric values for one grid cell, keyed by table name.
struct CellMetrics {
  std::vector<std::vector<double>> per_metric;  // [metric][repetition]
};

std::string format_mean_std(double mean, double stddev);

}  // namespace confmu
