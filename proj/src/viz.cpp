#include "confmu/viz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "confmu/metrics.hpp"
#include "confmu/stats.hpp"
#include "confmu/svg.hpp"

namespace confmu {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string heat_color(double v) {
  // linear white -> dark blue over [0,1]
  v = std::clamp(v, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 + v * (8.0 - 255.0)));
  const int g = static_cast<int>(std::lround(255.0 + v * (48.0 - 255.0)));
  const int b = static_cast<int>(std::lround(255.0 + v * (107.0 - 255.0)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

Matrix column_normalize(Matrix m) {
  for (std::size_t c = 0; c < m.cols; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) total += m(r, c);
    if (total <= 0.0) continue;  // all-zero column stays zero
    for (std::size_t r = 0; r < m.rows; ++r) m(r, c) /= total;
  }
  return m;
}

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::vector<std::size_t>> cooccurrence_counts(
    const std::vector<PredictionRecord>& records, std::size_t n_classes) {
  if (records.empty()) throw std::invalid_argument("cooccurrence: no records");
  std::vector<std::vector<std::size_t>> counts(n_classes,
                                               std::vector<std::size_t>(n_classes, 0));
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.set.size(); ++i) {
      for (std::size_t j = i + 1; j < r.set.size(); ++j) {
        counts[r.set[i]][r.set[j]]++;
        counts[r.set[j]][r.set[i]]++;
      }
    }
  }
  return counts;
}

Matrix cooccurrence_matrix(const std::vector<PredictionRecord>& records,
                           std::size_t n_classes) {
  const auto counts = cooccurrence_counts(records, n_classes);
  Matrix m(n_classes, n_classes);
  for (std::size_t r = 0; r < n_classes; ++r)
    for (std::size_t c = 0; c < n_classes; ++c)
      m(r, c) = static_cast<double>(counts[r][c]);
  return column_normalize(std::move(m));
}

CoocGraph cooccurrence_graph(const std::vector<PredictionRecord>& records,
                             std::size_t n_classes) {
  const auto counts = cooccurrence_counts(records, n_classes);
  CoocGraph graph;
  graph.degree.assign(n_classes, 0.0);
  for (std::size_t a = 0; a < n_classes; ++a) {
    for (std::size_t b = a + 1; b < n_classes; ++b) {
      if (counts[a][b] == 0) continue;
      graph.edges.push_back(
          {static_cast<int>(a), static_cast<int>(b), counts[a][b]});
      graph.degree[a] += static_cast<double>(counts[a][b]);
      graph.degree[b] += static_cast<double>(counts[a][b]);
    }
  }
  return graph;
}

Matrix zdcm(const std::vector<PredictionRecord>& records, std::size_t n_classes) {
  const auto counts = confusion_matrix(records, n_classes);
  Matrix m(n_classes, n_classes);
  for (std::size_t r = 0; r < n_classes; ++r)
    for (std::size_t c = 0; c < n_classes; ++c)
      m(r, c) = r == c ? 0.0 : static_cast<double>(counts[r][c]);
  return column_normalize(std::move(m));
}

Matrix normalized_confusion(const std::vector<PredictionRecord>& records,
                            std::size_t n_classes) {
  const auto counts = confusion_matrix(records, n_classes);
  Matrix m(n_classes, n_classes);
  for (std::size_t r = 0; r < n_classes; ++r)
    for (std::size_t c = 0; c < n_classes; ++c)
      m(r, c) = static_cast<double>(counts[r][c]);
  return column_normalize(std::move(m));
}

std::vector<SetFrequency> multiset_frequencies(
    const std::vector<PredictionRecord>& records, std::size_t max_sets) {
  if (records.empty()) throw std::invalid_argument("multiset_frequencies: no records");
  std::map<std::vector<int>, std::size_t> freq;
  for (const auto& r : records) freq[r.set]++;
  std::vector<SetFrequency> out;
  out.reserve(freq.size());
  for (const auto& [set, count] : freq) out.push_back({set, count});
  std::sort(out.begin(), out.end(), [](const SetFrequency& x, const SetFrequency& y) {
    if (x.count != y.count) return x.count > y.count;
    if (x.classes.size() != y.classes.size())
      return x.classes.size() < y.classes.size();
    return x.classes < y.classes;
  });
  if (out.size() > max_sets) out.resize(max_sets);
  return out;
}

// --- rendering -------------------------------------------------------------

std::string render_heatmap_svg(const Matrix& m,
                               const std::vector<std::string>& class_names,
                               const std::string& title) {
  const std::size_t n = m.rows;
  const double cell = 52.0;
  const double left = 120.0, top = 90.0;
  const double width = left + cell * static_cast<double>(n) + 20.0;
  const double height = top + cell * static_cast<double>(n) + 30.0;
  SvgWriter svg(width, height);
  svg.text(width / 2.0, 24.0, title, 14.0, "middle");
  for (std::size_t c = 0; c < n; ++c) {
    const double x = left + cell * (static_cast<double>(c) + 0.5);
    svg.text(x, top - 10.0, class_names[c], 11.0, "middle", "#000000",
             "rotate(-40 " + svg_num(x) + " " + svg_num(top - 10.0) + ")");
  }
  for (std::size_t r = 0; r < n; ++r) {
    const double y = top + cell * (static_cast<double>(r) + 0.5);
    svg.text(left - 8.0, y + 4.0, class_names[r], 11.0, "end");
    for (std::size_t c = 0; c < n; ++c) {
      const double v = m(r, c);
      const double x = left + cell * static_cast<double>(c);
      svg.rect(x, top + cell * static_cast<double>(r), cell, cell, heat_color(v),
               "#cccccc", 0.5);
      svg.text(x + cell / 2.0, y + 4.0, svg_label(v), 10.0, "middle",
               v > 0.5 ? "#ffffff" : "#000000");
    }
  }
  return svg.str();
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& class_names) {
  std::string out;
  for (const auto& name : class_names) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    out += class_names[r];
    for (std::size_t c = 0; c < m.cols; ++c) {
      out += ',';
      out += format_cell(m(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

// node width in [0.3, 2.0] from the weighted degree (linear)
double node_width(double degree, double deg_min, double deg_max) {
  if (deg_max <= deg_min) return 0.5 * (0.3 + 2.0);
  return 0.3 + (degree - deg_min) / (deg_max - deg_min) * (2.0 - 0.3);
}

double edge_penwidth(std::size_t weight, std::size_t w_max) {
  return 6.0 * static_cast<double>(weight) / static_cast<double>(w_max);
}

}  // namespace

std::string render_graph_dot(const CoocGraph& graph,
                             const std::vector<std::string>& class_names) {
  double deg_min = 0.0, deg_max = 0.0;
  if (!graph.degree.empty()) {
    deg_min = *std::min_element(graph.degree.begin(), graph.degree.end());
    deg_max = *std::max_element(graph.degree.begin(), graph.degree.end());
  }
  std::size_t w_max = 1;
  for (const auto& e : graph.edges) w_max = std::max(w_max, e.weight);

  std::string out = "graph cooccurrence {\n  layout=\"circo\";\n"
                    "  node [shape=circle, fixedsize=true];\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    out += "  \"" + class_names[c] + "\" [width=" +
           svg_num(node_width(graph.degree[c], deg_min, deg_max)) + "];\n";
  }
  for (const auto& e : graph.edges) {
    out += "  \"" + class_names[e.a] + "\" -- \"" + class_names[e.b] +
           "\" [penwidth=" + svg_num(edge_penwidth(e.weight, w_max)) + "];\n";
  }
  out += "}\n";
  return out;
}

std::string render_graph_svg(const CoocGraph& graph,
                             const std::vector<std::string>& class_names,
                             const std::string& title) {
  const std::size_t n = class_names.size();
  const double size = 460.0;
  const double cx = size / 2.0, cy = size / 2.0 + 10.0;
  const double radius = size / 2.0 - 80.0;
  SvgWriter svg(size, size + 30.0);
  svg.text(cx, 24.0, title, 14.0, "middle");

  std::vector<std::pair<double, double>> pos(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double angle = -kPi / 2.0 + 2.0 * kPi * static_cast<double>(c) /
                                          static_cast<double>(std::max<std::size_t>(n, 1));
    pos[c] = {cx + radius * std::cos(angle), cy + radius * std::sin(angle)};
  }

  double deg_min = 0.0, deg_max = 0.0;
  if (!graph.degree.empty()) {
    deg_min = *std::min_element(graph.degree.begin(), graph.degree.end());
    deg_max = *std::max_element(graph.degree.begin(), graph.degree.end());
  }
  std::size_t w_max = 1;
  for (const auto& e : graph.edges) w_max = std::max(w_max, e.weight);

  for (const auto& e : graph.edges) {
    svg.line(pos[e.a].first, pos[e.a].second, pos[e.b].first, pos[e.b].second,
             "#5577aa", edge_penwidth(e.weight, w_max));
  }
  for (std::size_t c = 0; c < n; ++c) {
    const double r = 18.0 * node_width(graph.degree[c], deg_min, deg_max);
    svg.circle(pos[c].first, pos[c].second, r, "#9ecae1", "#3366aa", 1.0);
    const double label_r = radius + 34.0;
    const double angle = -kPi / 2.0 + 2.0 * kPi * static_cast<double>(c) /
                                          static_cast<double>(std::max<std::size_t>(n, 1));
    svg.text(cx + label_r * std::cos(angle), cy + label_r * std::sin(angle) + 4.0,
             class_names[c], 11.0, "middle");
  }
  return svg.str();
}

std::string render_multiset_svg(const std::vector<SetFrequency>& sets,
                                const std::vector<std::string>& class_names,
                                const std::string& title) {
  const std::size_t n_cols = sets.size();
  const std::size_t n_rows = class_names.size();
  const double col_w = 30.0, row_h = 20.0;
  const double left = 120.0, top = 60.0, bar_h = 150.0;
  const double matrix_top = top + bar_h + 26.0;
  const double width = left + col_w * static_cast<double>(n_cols) + 20.0;
  const double height = matrix_top + row_h * static_cast<double>(n_rows) + 20.0;

  std::size_t max_count = 1;
  for (const auto& s : sets) max_count = std::max(max_count, s.count);

  SvgWriter svg(width, height);
  svg.text(width / 2.0, 24.0, title, 14.0, "middle");
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double y = matrix_top + row_h * (static_cast<double>(r) + 0.5);
    svg.text(left - 8.0, y + 4.0, class_names[r], 11.0, "end");
    svg.rect(left, matrix_top + row_h * static_cast<double>(r),
             col_w * static_cast<double>(n_cols), row_h,
             r % 2 == 0 ? "#f4f4f4" : "#ffffff");
  }
  for (std::size_t c = 0; c < n_cols; ++c) {
    const double x = left + col_w * (static_cast<double>(c) + 0.5);
    const double h =
        bar_h * static_cast<double>(sets[c].count) / static_cast<double>(max_count);
    svg.rect(x - col_w * 0.3, top + bar_h - h, col_w * 0.6, h, "#3366aa");
    svg.text(x, top + bar_h - h - 5.0, std::to_string(sets[c].count), 10.0, "middle");

    double y_first = -1.0, y_last = -1.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double y = matrix_top + row_h * (static_cast<double>(r) + 0.5);
      const bool member = std::find(sets[c].classes.begin(), sets[c].classes.end(),
                                    static_cast<int>(r)) != sets[c].classes.end();
      if (member) {
        if (y_first < 0.0) y_first = y;
        y_last = y;
      }
      svg.circle(x, y, 5.0, member ? "#222222" : "#dddddd");
    }
    if (y_first >= 0.0 && y_last > y_first)
      svg.line(x, y_first, x, y_last, "#222222", 2.0);
  }
  return svg.str();
}

std::string multiset_json(const std::vector<SetFrequency>& sets,
                          const std::vector<std::string>& class_names) {
  std::string out = "[";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i > 0) out += ',';
    out += "{\"set\":[";
    for (std::size_t j = 0; j < sets[i].classes.size(); ++j) {
      if (j > 0) out += ',';
      out += '"' + class_names[sets[i].classes[j]] + '"';
    }
    out += "],\"count\":" + std::to_string(sets[i].count) + "}";
  }
  out += "]\n";
  return out;
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats: empty input");
  std::sort(values.begin(), values.end());
  BoxStats stats;
  stats.q1 = quantile(values, 0.25);
  stats.median = quantile(values, 0.5);
  stats.q3 = quantile(values, 0.75);
  const double iqr = stats.q3 - stats.q1;
  const double lo_fence = stats.q1 - 1.5 * iqr;
  const double hi_fence = stats.q3 + 1.5 * iqr;
  stats.whisker_lo = stats.q3;
  stats.whisker_hi = stats.q1;
  bool any_in = false;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      stats.outliers.push_back(v);
    } else {
      if (!any_in) {
        stats.whisker_lo = v;
        stats.whisker_hi = v;
        any_in = true;
      } else {
        stats.whisker_lo = std::min(stats.whisker_lo, v);
        stats.whisker_hi = std::max(stats.whisker_hi, v);
      }
    }
  }
  return stats;
}

std::string render_boxplot_svg(const std::vector<std::string>& labels,
                               const std::vector<std::vector<double>>& values,
                               const std::vector<BoxComparison>& comparisons,
                               const std::string& title) {
  if (labels.size() != values.size())
    throw std::invalid_argument("boxplot: label/value count mismatch");
  const double left = 70.0, bottom_pad = 40.0, top = 60.0;
  const double slot_w = 90.0, plot_h = 260.0;
  const double bracket_h = 26.0;
  const double width = left + slot_w * static_cast<double>(labels.size()) + 30.0;
  const double height =
      top + bracket_h * static_cast<double>(comparisons.size()) + plot_h + bottom_pad;
  const double plot_top = top + bracket_h * static_cast<double>(comparisons.size());

  double v_min = 1e308, v_max = -1e308;
  for (const auto& vs : values) {
    for (double v : vs) {
      v_min = std::min(v_min, v);
      v_max = std::max(v_max, v);
    }
  }
  if (v_max <= v_min) {
    v_min -= 0.5;
    v_max += 0.5;
  }
  const double span = v_max - v_min;
  v_min -= 0.08 * span;
  v_max += 0.08 * span;

  auto y_of = [&](double v) {
    return plot_top + plot_h * (1.0 - (v - v_min) / (v_max - v_min));
  };

  SvgWriter svg(width, height);
  svg.text(width / 2.0, 24.0, title, 14.0, "middle");
  // y axis with 5 ticks
  svg.line(left, plot_top, left, plot_top + plot_h, "#000000", 1.0);
  for (int i = 0; i <= 4; ++i) {
    const double v = v_min + (v_max - v_min) * static_cast<double>(i) / 4.0;
    const double y = y_of(v);
    svg.line(left - 4.0, y, left, y, "#000000", 1.0);
    svg.text(left - 8.0, y + 4.0, svg_label(v), 10.0, "end");
  }

  std::vector<double> centers(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double cx = left + slot_w * (static_cast<double>(i) + 0.5);
    centers[i] = cx;
    const BoxStats stats = box_stats(values[i]);
    const double box_w = 44.0;
    svg.line(cx, y_of(stats.whisker_lo), cx, y_of(stats.q1), "#000000", 1.0);
    svg.line(cx, y_of(stats.q3), cx, y_of(stats.whisker_hi), "#000000", 1.0);
    svg.line(cx - box_w / 4.0, y_of(stats.whisker_lo), cx + box_w / 4.0,
             y_of(stats.whisker_lo), "#000000", 1.0);
    svg.line(cx - box_w / 4.0, y_of(stats.whisker_hi), cx + box_w / 4.0,
             y_of(stats.whisker_hi), "#000000", 1.0);
    svg.rect(cx - box_w / 2.0, y_of(stats.q3), box_w,
             std::max(0.0, y_of(stats.q1) - y_of(stats.q3)), "#9ecae1", "#000000", 1.0);
    svg.line(cx - box_w / 2.0, y_of(stats.median), cx + box_w / 2.0, y_of(stats.median),
             "#000000", 1.5);
    for (double o : stats.outliers) svg.circle(cx, y_of(o), 3.0, "#444444");
    svg.text(cx, plot_top + plot_h + 18.0, labels[i], 11.0, "middle");
  }

  // significance brackets, stacked above the plot
  for (std::size_t k = 0; k < comparisons.size(); ++k) {
    const auto& cmp = comparisons[k];
    const auto ia = std::find(labels.begin(), labels.end(), cmp.a) - labels.begin();
    const auto ib = std::find(labels.begin(), labels.end(), cmp.b) - labels.begin();
    if (ia >= static_cast<long>(labels.size()) || ib >= static_cast<long>(labels.size()))
      continue;
    const double y = plot_top - 8.0 - bracket_h * static_cast<double>(k);
    const double xa = centers[ia], xb = centers[ib];
    svg.line(xa, y, xb, y, "#000000", 1.0);
    svg.line(xa, y, xa, y + 5.0, "#000000", 1.0);
    svg.line(xb, y, xb, y + 5.0, "#000000", 1.0);
    svg.text((xa + xb) / 2.0, y - 4.0, cmp.stars, 11.0, "middle");
  }
  return svg.str();
}

std::string boxplot_json(const std::vector<std::string>& labels,
                         const std::vector<std::vector<double>>& values,
                         const std::vector<BoxComparison>& comparisons) {
  std::string out = "{\"groups\":[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ',';
    const BoxStats stats = box_stats(values[i]);
    out += "{\"label\":\"" + labels[i] + "\",\"q1\":" + format_cell(stats.q1) +
           ",\"median\":" + format_cell(stats.median) +
           ",\"q3\":" + format_cell(stats.q3) +
           ",\"whisker_lo\":" + format_cell(stats.whisker_lo) +
           ",\"whisker_hi\":" + format_cell(stats.whisker_hi) + ",\"outliers\":[";
    for (std::size_t j = 0; j < stats.outliers.size(); ++j) {
      if (j > 0) out += ',';
      out += format_cell(stats.outliers[j]);
    }
    out += "]}";
  }
  out += "],\"comparisons\":[";
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    if (i > 0) out += ',';
    out += "{\"a\":\"" + comparisons[i].a + "\",\"b\":\"" + comparisons[i].b +
           "\",\"t\":" + format_cell(comparisons[i].t) +
           ",\"p\":" + format_cell(comparisons[i].p) + ",\"stars\":\"" +
           comparisons[i].stars + "\"}";
  }
  out += "]}\n";
  return out;
}

std::string render_lolliplot_svg(const std::vector<std::string>& classifiers,
                                 const std::vector<std::string>& strategies,
                                 const std::vector<std::vector<double>>& grid,
                                 const std::string& title) {
  if (grid.size() != strategies.size())
    throw std::invalid_argument("lolliplot: grid/strategy count mismatch");
  const double left = 60.0, top = 60.0, panel_w = 180.0, plot_h = 220.0;
  const double width = left + panel_w * static_cast<double>(strategies.size()) + 20.0;
  const double height = top + plot_h + 60.0;

  double v_max = 0.0;
  for (const auto& row : grid)
    for (double v : row) v_max = std::max(v_max, v);
  if (v_max <= 0.0) v_max = 1.0;
  v_max *= 1.15;

  SvgWriter svg(width, height);
  svg.text(width / 2.0, 24.0, title, 14.0, "middle");
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const double x0 = left + panel_w * static_cast<double>(s);
    svg.text(x0 + panel_w / 2.0, top - 12.0, strategies[s], 12.0, "middle");
    svg.line(x0, top + plot_h, x0 + panel_w, top + plot_h, "#000000", 1.0);
    const double slot = panel_w / static_cast<double>(classifiers.size());
    for (std::size_t c = 0; c < classifiers.size(); ++c) {
      if (grid[s].size() != classifiers.size())
        throw std::invalid_argument("lolliplot: grid/classifier count mismatch");
      const double cx = x0 + slot * (static_cast<double>(c) + 0.5);
      const double v = grid[s][c];
      const double y = top + plot_h * (1.0 - v / v_max);
      svg.line(cx, top + plot_h, cx, y, "#888888", 2.0);
      svg.circle(cx, y, 5.0, "#3366aa");
      svg.text(cx, y - 9.0, svg_label(v), 10.0, "middle");
      svg.text(cx, top + plot_h + 16.0, classifiers[c], 10.0, "middle");
    }
  }
  return svg.str();
}

std::string lolliplot_csv(const std::vector<std::string>& classifiers,
                          const std::vector<std::string>& strategies,
                          const std::vector<std::vector<double>>& grid) {
  std::string out = "strategy,classifier,setsize_mean\n";
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    for (std::size_t c = 0; c < classifiers.size(); ++c) {
      out += strategies[s] + ',' + classifiers[c] + ',' + format_cell(grid[s][c]) + '\n';
    }
  }
  return out;
}

}  // namespace confmu
