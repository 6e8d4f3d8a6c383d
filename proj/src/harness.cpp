#include "confmu/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "confmu/metrics.hpp"
#include "confmu/stats.hpp"
#include "confmu/viz.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace confmu {

namespace {

bool log_quiet() {
  const char* level = std::getenv("CONFMU_LOG");
  return level && std::string(level) == "quiet";
}

void log_info(const std::string& message) {
  if (!log_quiet()) std::fprintf(stderr, "[confmu] %s\n", message.c_str());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

SynthConfig parse_synth(const json& j) {
  SynthConfig cfg;
  cfg.n_users = j.value("users", cfg.n_users);
  cfg.n_classes = j.value("classes", cfg.n_classes);
  cfg.per_user_per_class = j.value("per_user_per_class", cfg.per_user_per_class);
  cfg.dims = j.value("dims", cfg.dims);
  cfg.user_shift = j.value("user_shift", cfg.user_shift);
  cfg.noise = j.value("noise", cfg.noise);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

ClassifierSpec parse_classifier(const json& j) {
  ClassifierSpec spec;
  const std::string name = j.at("name").get<std::string>();
  spec.kind = classifier_from_name(name);
  spec.label = j.value("label", name);
  if (j.contains("n_trees")) spec.config.forest.n_trees = j["n_trees"].get<std::size_t>();
  if (j.contains("max_depth") && !j["max_depth"].is_null())
    spec.config.forest.max_depth = j["max_depth"].get<std::size_t>();
  if (j.contains("min_samples_split"))
    spec.config.forest.min_samples_split = j["min_samples_split"].get<std::size_t>();
  if (j.contains("features_per_split"))
    spec.config.forest.features_per_split = j["features_per_split"].get<std::size_t>();
  if (j.contains("k")) spec.config.knn.k = j["k"].get<std::size_t>();
  return spec;
}

std::string classifier_fingerprint(const ClassifierSpec& spec) {
  std::ostringstream ss;
  ss << classifier_name(spec.kind) << '|' << spec.label << '|'
     << spec.config.forest.n_trees << '|'
     << (spec.config.forest.max_depth ? std::to_string(*spec.config.forest.max_depth)
                                      : "none")
     << '|' << spec.config.forest.min_samples_split << '|'
     << spec.config.forest.features_per_split << '|' << spec.config.knn.k;
  return ss.str();
}

std::string dataset_fingerprint(const DatasetSpec& spec) {
  std::ostringstream ss;
  ss << spec.name << '|' << spec.format;
  if (spec.synth) {
    const auto& s = *spec.synth;
    ss << "|synth:" << s.n_users << ',' << s.n_classes << ',' << s.per_user_per_class
       << ',' << s.dims << ',' << s.user_shift << ',' << s.noise << ',' << s.seed;
  } else {
    ss << "|file:" << hex64(fnv1a(read_file(spec.path)));
    if (spec.format == "raw-stream") {
      ss << "|raw:" << spec.raw.window_len << ',' << spec.raw.filter_width;
      if (!spec.raw.second_sensor_path.empty())
        ss << ',' << hex64(fnv1a(read_file(spec.raw.second_sensor_path)));
    }
  }
  return ss.str();
}

struct CellOutputs {
  CellMetrics metrics;
  std::vector<PredictionRecord> first_rep_records;
};

CellOutputs run_cell(const MultiUserDataset& data, const ClassifierSpec& classifier,
                     StrategyKind strategy, const ExperimentConfig& config) {
  CellOutputs out;
  const auto& names = metric_table_names();
  out.metrics.per_metric.assign(names.size(), {});
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t rep_seed = config.base_seed + rep;
    auto records = run_strategy(data, strategy, classifier.kind, classifier.config,
                                config.epsilon, rep_seed);
    const MetricsReport report = compute_metrics(records, data.n_classes());
    for (std::size_t m = 0; m < names.size(); ++m)
      out.metrics.per_metric[m].push_back(metric_value(report, names[m]));
    if (rep == 0) out.first_rep_records = std::move(records);
  }
  return out;
}

json metrics_to_json(const CellMetrics& metrics) {
  const auto& names = metric_table_names();
  json j = json::object();
  for (std::size_t m = 0; m < names.size(); ++m) j[names[m]] = metrics.per_metric[m];
  return j;
}

CellMetrics metrics_from_json(const json& j) {
  const auto& names = metric_table_names();
  CellMetrics metrics;
  metrics.per_metric.reserve(names.size());
  for (const auto& name : names)
    metrics.per_metric.push_back(j.at(name).get<std::vector<double>>());
  return metrics;
}

std::string cell_stem(const std::string& dataset, const std::string& classifier,
                      StrategyKind strategy) {
  return dataset + "_" + classifier + "_" + strategy_name(strategy);
}

void write_cell_viz(const fs::path& run_dir, const std::string& stem,
                    const std::vector<PredictionRecord>& records,
                    const std::vector<std::string>& class_names, std::size_t max_sets) {
  const std::size_t n_classes = class_names.size();
  const Matrix cooc = cooccurrence_matrix(records, n_classes);
  write_file(run_dir / (stem + "_cooc.svg"),
             render_heatmap_svg(cooc, class_names, stem + " co-occurrence"));
  write_file(run_dir / (stem + "_cooc.csv"), matrix_csv(cooc, class_names));

  const CoocGraph graph = cooccurrence_graph(records, n_classes);
  write_file(run_dir / (stem + "_coocgraph.dot"), render_graph_dot(graph, class_names));
  write_file(run_dir / (stem + "_coocgraph.svg"),
             render_graph_svg(graph, class_names, stem + " co-occurrence graph"));

  const Matrix zd = zdcm(records, n_classes);
  write_file(run_dir / (stem + "_zdcm.svg"),
             render_heatmap_svg(zd, class_names, stem + " ZDCM"));
  write_file(run_dir / (stem + "_zdcm.csv"), matrix_csv(zd, class_names));

  const Matrix cm = normalized_confusion(records, n_classes);
  write_file(run_dir / (stem + "_cm.svg"),
             render_heatmap_svg(cm, class_names, stem + " confusion matrix"));
  write_file(run_dir / (stem + "_cm.csv"), matrix_csv(cm, class_names));

  const auto sets = multiset_frequencies(records, max_sets);
  write_file(run_dir / (stem + "_multiset.svg"),
             render_multiset_svg(sets, class_names, stem + " prediction sets"));
  write_file(run_dir / (stem + "_multiset.json"), multiset_json(sets, class_names));
}

const std::vector<std::pair<std::string, std::string>>& hypothesis_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"UIM", "MM"}, {"UIM", "UDM"}, {"UDM", "MM"}, {"UCM", "UIM"}};
  return pairs;
}

std::size_t metric_index(const std::string& name) {
  const auto& names = metric_table_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::logic_error("unknown metric name: " + name);
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

std::string format_mean_std(double mean, double stddev) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f±%.2f", mean, stddev);
  return buf;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  json j;
  {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    in >> j;
  }

  ExperimentConfig config;
  config.epsilon = j.value("epsilon", config.epsilon);
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw std::runtime_error("config: epsilon must lie in (0,1)");
  config.repetitions = j.value("repetitions", config.repetitions);
  if (config.repetitions < 1) throw std::runtime_error("config: repetitions must be >= 1");
  config.base_seed = j.value("base_seed", config.base_seed);
  config.viz = j.value("viz", config.viz);
  config.max_sets = j.value("max_sets", config.max_sets);
  config.output_dir = j.value("output_dir", config.output_dir);

  if (!j.contains("datasets") || j["datasets"].empty())
    throw std::runtime_error("config: at least one dataset is required");
  for (const auto& jd : j["datasets"]) {
    DatasetSpec spec;
    spec.name = jd.at("name").get<std::string>();
    if (jd.contains("synth")) {
      spec.synth = parse_synth(jd["synth"]);
    } else {
      spec.path = jd.at("path").get<std::string>();
      spec.format = jd.value("format", spec.format);
      if (spec.format != "preprocessed" && spec.format != "raw-stream")
        throw std::runtime_error("config: unknown dataset format " + spec.format);
      spec.raw.window_len = jd.value("window_len", spec.raw.window_len);
      spec.raw.filter_width = jd.value("filter_width", spec.raw.filter_width);
      spec.raw.second_sensor_path = jd.value("second_sensor", std::string());
    }
    config.datasets.push_back(std::move(spec));
  }

  if (j.contains("classifiers")) {
    for (const auto& jc : j["classifiers"]) config.classifiers.push_back(parse_classifier(jc));
  } else {
    for (const char* name : {"gnb", "rf", "knn"}) {
      ClassifierSpec spec;
      spec.kind = classifier_from_name(name);
      spec.label = name;
      config.classifiers.push_back(spec);
    }
  }

  if (j.contains("strategies")) {
    for (const auto& js : j["strategies"])
      config.strategies.push_back(strategy_from_name(js.get<std::string>()));
  } else {
    config.strategies = {StrategyKind::MM, StrategyKind::UDM, StrategyKind::UIM,
                         StrategyKind::UCM};
  }
  return config;
}

MultiUserDataset load_dataset(const DatasetSpec& spec) {
  if (spec.synth) return generate_synthetic(*spec.synth);
  if (!fs::exists(spec.path))
    throw std::runtime_error("dataset file does not exist: " + spec.path);
  MultiUserDataset data = spec.format == "raw-stream"
                              ? ingest_raw_stream(spec.path, spec.raw)
                              : read_preprocessed_csv(spec.path);
  return filter_min_instances(data);
}

void run_experiment(const ExperimentConfig& config) {
  const fs::path run_dir(config.output_dir);
  const fs::path cells_dir = run_dir / "cells";
  fs::create_directories(cells_dir);

  json hypotheses = json::object();

  for (const auto& dataset_spec : config.datasets) {
    const MultiUserDataset data = load_dataset(dataset_spec);
    log_info("dataset " + dataset_spec.name + ": " + std::to_string(data.size()) +
             " rows, " + std::to_string(data.n_classes()) + " classes, " +
             std::to_string(data.n_users()) + " users");
    const std::string ds_fingerprint = dataset_fingerprint(dataset_spec);

    // cell index: [strategy][classifier]
    std::vector<std::vector<CellMetrics>> grid(
        config.strategies.size(), std::vector<CellMetrics>(config.classifiers.size()));

    struct CellJob {
      std::size_t s, c;
      std::string stem;
      std::string fingerprint;
      bool cached = false;
      std::future<CellOutputs> result;
    };
    std::vector<CellJob> jobs;

    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
        CellJob job;
        job.s = s;
        job.c = c;
        job.stem = cell_stem(dataset_spec.name, config.classifiers[c].label,
                             config.strategies[s]);
        std::ostringstream fp;
        fp << ds_fingerprint << '|' << classifier_fingerprint(config.classifiers[c])
           << '|' << strategy_name(config.strategies[s]) << '|' << config.epsilon << '|'
           << config.repetitions << '|' << config.base_seed;
        job.fingerprint = hex64(fnv1a(fp.str()));

        const fs::path metrics_path = cells_dir / (job.stem + ".metrics.json");
        const fs::path records_path = run_dir / (job.stem + "_records.csv");
        const fs::path hash_path = cells_dir / (job.stem + ".hash");
        if (fs::exists(metrics_path) && fs::exists(records_path) &&
            fs::exists(hash_path)) {
          const std::string recorded = read_file(hash_path);
          const std::string current =
              job.fingerprint + ":" +
              hex64(fnv1a(read_file(metrics_path) + read_file(records_path)));
          if (recorded == current) {
            job.cached = true;
            log_info("cell " + job.stem + ": cached, skipping");
          }
        }
        jobs.push_back(std::move(job));
      }
    }

    // work pool: cells run in parallel, results land in grid order
    const std::size_t workers =
        std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::size_t launched = 0;
    for (auto& job : jobs) {
      if (job.cached) continue;
      job.result = std::async(
          launched < workers ? std::launch::async : std::launch::deferred,
          [&data, &config, &job]() {
            return run_cell(data, config.classifiers[job.c],
                            config.strategies[job.s], config);
          });
      ++launched;
    }

    for (auto& job : jobs) {
      const fs::path metrics_path = cells_dir / (job.stem + ".metrics.json");
      const fs::path records_path = run_dir / (job.stem + "_records.csv");
      const fs::path hash_path = cells_dir / (job.stem + ".hash");
      if (job.cached) {
        json cached_json = json::parse(read_file(metrics_path));
        grid[job.s][job.c] = metrics_from_json(cached_json.at("metrics"));
      } else {
        CellOutputs outputs = job.result.get();
        grid[job.s][job.c] = outputs.metrics;
        json cell_json;
        cell_json["dataset"] = dataset_spec.name;
        cell_json["classifier"] = config.classifiers[job.c].label;
        cell_json["strategy"] = strategy_name(config.strategies[job.s]);
        cell_json["metrics"] = metrics_to_json(outputs.metrics);
        write_file(metrics_path, cell_json.dump(2) + "\n");
        write_records_csv(records_path.string(), outputs.first_rep_records,
                          data.class_names, data.user_names);
        write_file(hash_path,
                   job.fingerprint + ":" +
                       hex64(fnv1a(read_file(metrics_path) + read_file(records_path))));
        log_info("cell " + job.stem + ": done");
      }
      if (config.viz) {
        const RecordsFile rec = read_records_csv(records_path.string());
        write_cell_viz(run_dir, job.stem, rec.records, data.class_names,
                       config.max_sets);
      }
    }

    // per-strategy tables, columns = classifiers
    const auto& names = metric_table_names();
    for (std::size_t s = 0; s < config.strategies.size(); ++s) {
      std::string table = "metric";
      for (const auto& clf : config.classifiers) table += ',' + clf.label;
      table += '\n';
      for (std::size_t m = 0; m < names.size(); ++m) {
        const double scale = metric_reported_as_percent(names[m]) ? 100.0 : 1.0;
        table += names[m];
        for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
          const auto& vals = grid[s][c].per_metric[m];
          double mean = vals[0], stddev = 0.0;
          if (vals.size() >= 2) {
            const MeanStd agg = aggregate(vals);
            mean = agg.mean;
            stddev = agg.stddev;
          }
          table += ',' + format_mean_std(mean * scale, stddev * scale);
        }
        table += '\n';
      }
      write_file(run_dir / (dataset_spec.name + "_" +
                            strategy_name(config.strategies[s]) + "_table.csv"),
                 table);
    }

    // coverage boxplots with pairwise significance, one per classifier
    const std::size_t cov_idx = metric_index("coverage");
    const std::size_t size_idx = metric_index("setsize");
    std::vector<std::string> strategy_labels;
    for (StrategyKind s : config.strategies) strategy_labels.push_back(strategy_name(s));

    for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
      std::vector<std::vector<double>> coverage_per_strategy;
      for (std::size_t s = 0; s < config.strategies.size(); ++s)
        coverage_per_strategy.push_back(grid[s][c].per_metric[cov_idx]);

      std::vector<BoxComparison> comparisons;
      json clf_hyp = json::object();
      for (const auto& [a, b] : hypothesis_pairs()) {
        const auto ia = std::find(strategy_labels.begin(), strategy_labels.end(), a);
        const auto ib = std::find(strategy_labels.begin(), strategy_labels.end(), b);
        if (ia == strategy_labels.end() || ib == strategy_labels.end()) continue;
        const auto& va = coverage_per_strategy[ia - strategy_labels.begin()];
        const auto& vb = coverage_per_strategy[ib - strategy_labels.begin()];
        if (va.size() < 2 || vb.size() < 2) continue;
        const WelchResult w = welch_t_test(va, vb);
        const std::string stars = significance_stars(w.p);
        comparisons.push_back({a, b, w.t, w.p, stars});
        json entry;
        entry["t"] = w.t;
        entry["p"] = w.p;
        entry["stars"] = stars;
        entry["mean_a"] = aggregate(va).mean;
        entry["mean_b"] = aggregate(vb).mean;
        clf_hyp[a + "_vs_" + b] = entry;
      }
      if (!clf_hyp.empty())
        hypotheses[dataset_spec.name][config.classifiers[c].label] = clf_hyp;

      if (config.viz && config.strategies.size() >= 1 &&
          grid[0][c].per_metric[cov_idx].size() >= 2) {
        const std::string stem =
            dataset_spec.name + "_" + config.classifiers[c].label + "_all_boxplot";
        write_file(run_dir / (stem + ".svg"),
                   render_boxplot_svg(strategy_labels, coverage_per_strategy, comparisons,
                                      dataset_spec.name + " " +
                                          config.classifiers[c].label + " coverage"));
        write_file(run_dir / (stem + ".json"),
                   boxplot_json(strategy_labels, coverage_per_strategy, comparisons));
      }
    }

    // set-size lolliplot over the classifier x strategy grid
    if (config.viz) {
      std::vector<std::string> classifier_labels;
      for (const auto& clf : config.classifiers) classifier_labels.push_back(clf.label);
      std::vector<std::vector<double>> size_grid(config.strategies.size());
      for (std::size_t s = 0; s < config.strategies.size(); ++s) {
        for (std::size_t c = 0; c < config.classifiers.size(); ++c) {
          const auto& vals = grid[s][c].per_metric[size_idx];
          double mean = 0.0;
          for (double v : vals) mean += v;
          size_grid[s].push_back(mean / static_cast<double>(vals.size()));
        }
      }
      const std::string stem = dataset_spec.name + "_all_all_lolliplot";
      write_file(run_dir / (stem + ".svg"),
                 render_lolliplot_svg(classifier_labels, strategy_labels, size_grid,
                                      dataset_spec.name + " set size"));
      write_file(run_dir / (stem + ".csv"),
                 lolliplot_csv(classifier_labels, strategy_labels, size_grid));
    }
  }

  write_file(run_dir / "hypotheses.json", hypotheses.dump(2) + "\n");
  log_info("run complete: " + config.output_dir);
}

void write_hypotheses_report(const std::string& run_dir_str) {
  const fs::path run_dir(run_dir_str);
  const fs::path cells_dir = run_dir / "cells";
  if (!fs::exists(cells_dir))
    throw std::runtime_error("no cells directory under run dir: " + run_dir_str);

  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>
      coverage;  // dataset -> classifier -> strategy -> per-rep coverage

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cells_dir)) {
    if (entry.path().string().ends_with(".metrics.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const std::size_t cov_idx = metric_index("coverage");
  for (const auto& file : files) {
    const json j = json::parse(read_file(file));
    const CellMetrics metrics = metrics_from_json(j.at("metrics"));
    coverage[j.at("dataset").get<std::string>()][j.at("classifier").get<std::string>()]
            [j.at("strategy").get<std::string>()] = metrics.per_metric[cov_idx];
  }

  json hypotheses = json::object();
  for (const auto& [dataset, per_clf] : coverage) {
    for (const auto& [classifier, per_strategy] : per_clf) {
      json clf_hyp = json::object();
      for (const auto& [a, b] : hypothesis_pairs()) {
        const auto ita = per_strategy.find(a);
        const auto itb = per_strategy.find(b);
        if (ita == per_strategy.end() || itb == per_strategy.end()) continue;
        if (ita->second.size() < 2 || itb->second.size() < 2) continue;
        const WelchResult w = welch_t_test(ita->second, itb->second);
        json entry;
        entry["t"] = w.t;
        entry["p"] = w.p;
        entry["stars"] = significance_stars(w.p);
        entry["mean_a"] = aggregate(ita->second).mean;
        entry["mean_b"] = aggregate(itb->second).mean;
        clf_hyp[a + "_vs_" + b] = entry;
      }
      if (!clf_hyp.empty()) hypotheses[dataset][classifier] = clf_hyp;
    }
  }
  write_file(run_dir / "hypotheses.json", hypotheses.dump(2) + "\n");
}

}  // namespace confmu
