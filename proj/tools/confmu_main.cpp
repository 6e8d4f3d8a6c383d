#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "confmu/harness.hpp"
#include "confmu/viz.hpp"

namespace fs = std::filesystem;
using namespace confmu;

namespace {

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
}

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            const std::optional<std::size_t>& repetitions,
            const std::optional<double>& epsilon,
            const std::optional<std::uint64_t>& seed, bool no_viz) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (out_dir) config.output_dir = *out_dir;
  if (repetitions) config.repetitions = *repetitions;
  if (epsilon) {
    if (!(*epsilon > 0.0 && *epsilon < 1.0))
      throw std::runtime_error("config: epsilon must lie in (0,1)");
    config.epsilon = *epsilon;
  }
  if (seed) config.base_seed = *seed;
  if (no_viz) config.viz = false;
  run_experiment(config);
  return 0;
}

int cmd_ingest(const std::string& path, const std::string& format,
               const std::string& out, const RawStreamOptions& raw) {
  DatasetSpec spec;
  spec.name = "ingest";
  spec.path = path;
  spec.format = format;
  spec.raw = raw;
  const MultiUserDataset data = load_dataset(spec);
  write_preprocessed_csv(data, out);
  std::printf("wrote %zu rows, %zu features, %zu classes, %zu users to %s\n",
              data.size(), data.n_features(), data.n_classes(), data.n_users(),
              out.c_str());
  return 0;
}

int cmd_synth(const SynthConfig& config, const std::string& out) {
  const MultiUserDataset data = generate_synthetic(config);
  write_preprocessed_csv(data, out);
  std::printf("wrote %zu rows to %s\n", data.size(), out.c_str());
  return 0;
}

int cmd_viz(const std::string& records_path, const std::string& chart,
            const std::string& out_dir, std::size_t max_sets) {
  const RecordsFile file = read_records_csv(records_path);
  const std::size_t n_classes = file.class_names.size();
  fs::create_directories(out_dir);
  std::string stem = fs::path(records_path).stem().string();
  const std::string suffix = "_records";
  if (stem.size() > suffix.size() &&
      stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
    stem = stem.substr(0, stem.size() - suffix.size());
  const fs::path base = fs::path(out_dir) / (stem + "_" + chart);

  if (chart == "cooc") {
    const Matrix m = cooccurrence_matrix(file.records, n_classes);
    write_text(base.string() + ".svg",
               render_heatmap_svg(m, file.class_names, stem + " co-occurrence"));
    write_text(base.string() + ".csv", matrix_csv(m, file.class_names));
  } else if (chart == "coocgraph") {
    const CoocGraph g = cooccurrence_graph(file.records, n_classes);
    write_text(base.string() + ".dot", render_graph_dot(g, file.class_names));
    write_text(base.string() + ".svg",
               render_graph_svg(g, file.class_names, stem + " co-occurrence graph"));
  } else if (chart == "zdcm") {
    const Matrix m = zdcm(file.records, n_classes);
    write_text(base.string() + ".svg",
               render_heatmap_svg(m, file.class_names, stem + " ZDCM"));
    write_text(base.string() + ".csv", matrix_csv(m, file.class_names));
  } else if (chart == "cm") {
    const Matrix m = normalized_confusion(file.records, n_classes);
    write_text(base.string() + ".svg",
               render_heatmap_svg(m, file.class_names, stem + " confusion matrix"));
    write_text(base.string() + ".csv", matrix_csv(m, file.class_names));
  } else if (chart == "multiset") {
    const auto sets = multiset_frequencies(file.records, max_sets);
    write_text(base.string() + ".svg",
               render_multiset_svg(sets, file.class_names, stem + " prediction sets"));
    write_text(base.string() + ".json", multiset_json(sets, file.class_names));
  } else {
    throw std::runtime_error("unknown chart type: " + chart +
                             " (boxplot/lolliplot are emitted by `run`)");
  }
  std::printf("wrote %s.*\n", base.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal prediction evaluation for multi-user datasets"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment grid from a config file");
  std::string run_config;
  std::optional<std::string> run_out;
  std::optional<std::size_t> run_reps;
  std::optional<double> run_eps;
  std::optional<std::uint64_t> run_seed;
  bool run_no_viz = false;
  run->add_option("config", run_config, "experiment config (JSON)")->required();
  run->add_option("--out", run_out, "output directory (overrides config)");
  run->add_option("--repetitions", run_reps, "repetitions per cell (overrides config)");
  run->add_option("--epsilon", run_eps, "conformal error level (overrides config)");
  run->add_option("--seed", run_seed, "base seed (overrides config)");
  run->add_flag("--no-viz", run_no_viz, "skip chart emission");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "ingest a dataset file and emit the canonical CSV");
  std::string ingest_path, ingest_out;
  std::string ingest_format = "preprocessed";
  RawStreamOptions ingest_raw_opts;
  ingest->add_option("path", ingest_path, "input file")->required();
  ingest->add_option("--format", ingest_format, "preprocessed | raw-stream")
      ->check(CLI::IsMember({"preprocessed", "raw-stream"}));
  ingest->add_option("--out", ingest_out, "output CSV path")->required();
  ingest->add_option("--window-len", ingest_raw_opts.window_len,
                     "raw-stream window length (samples)");
  ingest->add_option("--filter-width", ingest_raw_opts.filter_width,
                     "raw-stream moving average width");
  ingest->add_option("--sensor2", ingest_raw_opts.second_sensor_path,
                     "second sensor stream (raw-stream only)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic multi-user dataset");
  SynthConfig synth_config;
  std::string synth_out;
  synth->add_option("--users", synth_config.n_users, "number of users");
  synth->add_option("--classes", synth_config.n_classes, "number of classes");
  synth->add_option("--per-user-per-class", synth_config.per_user_per_class,
                    "instances per (user, class) pair");
  synth->add_option("--dims", synth_config.dims, "feature dimensions");
  synth->add_option("--user-shift", synth_config.user_shift, "per-user offset norm");
  synth->add_option("--noise", synth_config.noise, "within-class noise sd");
  synth->add_option("--seed", synth_config.seed, "generator seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  // viz
  auto* viz = app.add_subcommand("viz", "render charts from a prediction-record CSV");
  std::string viz_records, viz_chart, viz_out = ".";
  std::size_t viz_max_sets = 20;
  viz->add_option("records", viz_records, "records CSV (from a run)")->required();
  viz->add_option("--chart", viz_chart, "cooc | coocgraph | zdcm | cm | multiset")
      ->required()
      ->check(CLI::IsMember({"cooc", "coocgraph", "zdcm", "cm", "multiset"}));
  viz->add_option("--out", viz_out, "output directory");
  viz->add_option("--max-sets", viz_max_sets, "multiset chart column cap");

  // hypotheses
  auto* hyp = app.add_subcommand("hypotheses", "recompute hypotheses.json for a run dir");
  std::string hyp_dir;
  hyp->add_option("run_dir", hyp_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(run_config, run_out, run_reps, run_eps, run_seed, run_no_viz);
    if (ingest->parsed())
      return cmd_ingest(ingest_path, ingest_format, ingest_out, ingest_raw_opts);
    if (synth->parsed()) return cmd_synth(synth_config, synth_out);
    if (viz->parsed()) return cmd_viz(viz_records, viz_chart, viz_out, viz_max_sets);
    if (hyp->parsed()) {
      write_hypotheses_report(hyp_dir);
      std::printf("wrote %s/hypotheses.json\n", hyp_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
