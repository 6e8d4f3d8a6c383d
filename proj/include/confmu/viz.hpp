#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "confmu/conformal.hpp"
#include "confmu/matrix.hpp"

namespace confmu {

// Column-normalized class-pair co-occurrence over prediction sets: entry
// [r][c] is the proportion of c's co-occurrences that were with r. Columns
// sum to 1, or to 0 when a class never co-occurs; the diagonal is 0.
Matrix cooccurrence_matrix(const std::vector<PredictionRecord>& records,
                           std::size_t n_classes);

// Symmetric raw pair counts (one count per set per unordered pair).
std::vector<std::vector<std::size_t>> cooccurrence_counts(
    const std::vector<PredictionRecord>& records, std::size_t n_classes);

struct GraphEdge {
  int a = 0;
  int b = 0;
  std::size_t weight = 0;
};

// Undirected co-occurrence graph: edge weight = pair count, node size is
// driven by the weighted degree.
struct CoocGraph {
  std::vector<GraphEdge> edges;     // a < b, ordered by (a, b)
  std::vector<double> degree;       // weighted degree per class
};

CoocGraph cooccurrence_graph(const std::vector<PredictionRecord>& records,
                             std::size_t n_classes);

// Confusion matrix with the diagonal zeroed before column normalization.
Matrix zdcm(const std::vector<PredictionRecord>& records, std::size_t n_classes);

// Column-normalized confusion matrix.
Matrix normalized_confusion(const std::vector<PredictionRecord>& records,
                            std::size_t n_classes);

struct SetFrequency {
  std::vector<int> classes;  // ascending; empty = the empty prediction set
  std::size_t count = 0;
};

// Distinct prediction sets ranked by frequency (ties: smaller set first,
// then lexicographic), truncated to max_sets entries.
std::vector<SetFrequency> multiset_frequencies(
    const std::vector<PredictionRecord>& records, std::size_t max_sets = 20);

// --- rendering -----------------------------------------------------------

std::string render_heatmap_svg(const Matrix& m,
                               const std::vector<std::string>& class_names,
                               const std::string& title);
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& class_names);

std::string render_graph_dot(const CoocGraph& graph,
                             const std::vector<std::string>& class_names);
std::string render_graph_svg(const CoocGraph& graph,
                             const std::vector<std::string>& class_names,
                             const std::string& title);

std::string render_multiset_svg(const std::vector<SetFrequency>& sets,
                                const std::vector<std::string>& class_names,
                                const std::string& title);
std::string multiset_json(const std::vector<SetFrequency>& sets,
                          const std::vector<std::string>& class_names);

struct BoxStats {
  double q1 = 0, median = 0, q3 = 0;
  double whisker_lo = 0, whisker_hi = 0;  // 1.5 IQR rule
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

struct BoxComparison {
  std::string a, b;
  double t = 0, p = 1;
  std::string stars;
};

std::string render_boxplot_svg(const std::vector<std::string>& labels,
                               const std::vector<std::vector<double>>& values,
                               const std::vector<BoxComparison>& comparisons,
                               const std::string& title);
std::string boxplot_json(const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& values,
                         const std::vector<BoxComparison>& comparisons);

// grid[strategy][classifier] = mean set size
std::string render_lolliplot_svg(const std::vector<std::string>& classifiers,
                                 const std::vector<std::string>& strategies,
                                 const std::vector<std::vector<double>>& grid,
                                 const std::string& title);
std::string lolliplot_csv(const std::vector<std::string>& classifiers,
                          const std::vector<std::string>& strategies,
                          const std::vector<std::vector<double>>& grid);

}  // namespace confmu
