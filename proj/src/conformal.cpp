#include "confmu/conformal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace confmu {

double nonconformity(double score) { return 1.0 - score; }

ConformalModel calibrate(std::shared_ptr<const ScoreModel> base, const Matrix& X_cal,
                         const std::vector<int>& y_cal, double epsilon) {
  if (!base) throw std::invalid_argument("calibrate: null base model");
  if (X_cal.rows == 0) throw std::invalid_argument("calibrate: empty calibration set");
  if (X_cal.rows != y_cal.size())
    throw std::invalid_argument("calibrate: X/y size mismatch");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("calibrate: epsilon must lie in (0,1)");

  ConformalModel model;
  model.base = std::move(base);
  model.epsilon = epsilon;
  model.cal_scores.reserve(X_cal.rows);
  for (std::size_t i = 0; i < X_cal.rows; ++i) {
    const auto scores = model.base->predict_scores(X_cal.row(i));
    model.cal_scores.push_back(nonconformity(scores[y_cal[i]]));
  }
  std::sort(model.cal_scores.begin(), model.cal_scores.end());

  const std::size_t n = model.cal_scores.size();
  const double rank = static_cast<double>(n + 1) * (1.0 - epsilon);
  const auto m = static_cast<std::size_t>(std::ceil(rank - 1e-12));
  model.q_hat = m > n ? 1.0 : model.cal_scores[m - 1];
  return model;
}

double p_value_from_alpha(const ConformalModel& model, double alpha) {
  const auto& cal = model.cal_scores;
  const auto n_ge = static_cast<std::size_t>(
      cal.end() - std::lower_bound(cal.begin(), cal.end(), alpha));
  return static_cast<double>(n_ge + 1) / static_cast<double>(cal.size() + 1);
}

PredictionRecord predict_set(const ConformalModel& model, std::span<const double> x,
                             int truth, int user) {
  const auto scores = model.base->predict_scores(x);
  PredictionRecord record;
  record.truth = truth;
  record.user = user;
  record.point = argmax_class(scores);
  record.p_values.resize(scores.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    const double alpha = nonconformity(scores[c]);
    record.p_values[c] = p_value_from_alpha(model, alpha);
    if (alpha <= model.q_hat) record.set.push_back(static_cast<int>(c));
  }
  return record;
}

double p_value(const ConformalModel& model, std::span<const double> x, int class_index) {
  const auto scores = model.base->predict_scores(x);
  return p_value_from_alpha(model, nonconformity(scores[class_index]));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<PredictionRecord>& records,
                       const std::vector<std::string>& class_names,
                       const std::vector<std::string>& user_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write records file: " + path);
  out << "user,truth,point,set";
  for (const auto& name : class_names) out << ",p_" << name;
  out << '\n';
  for (const auto& r : records) {
    out << (r.user >= 0 ? user_names[r.user] : "") << ','
        << (r.truth >= 0 ? class_names[r.truth] : "") << ','
        << (r.point >= 0 ? class_names[r.point] : "") << ',';
    for (std::size_t i = 0; i < r.set.size(); ++i) {
      if (i > 0) out << ';';
      out << class_names[r.set[i]];
    }
    for (double p : r.p_values) out << ',' << format_value(p);
    out << '\n';
  }
}

RecordsFile read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open records file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty records file: " + path);
  auto header = split_line(line);
  if (header.size() < 5 || header[0] != "user" || header[1] != "truth" ||
      header[2] != "point" || header[3] != "set")
    throw std::runtime_error("bad header in records file: " + path);

  RecordsFile out;
  std::unordered_map<std::string, int> class_index, user_index;
  for (std::size_t i = 4; i < header.size(); ++i) {
    if (header[i].rfind("p_", 0) != 0)
      throw std::runtime_error("bad p-value column in records file: " + header[i]);
    const std::string name = header[i].substr(2);
    class_index.emplace(name, static_cast<int>(out.class_names.size()));
    out.class_names.push_back(name);
  }
  const std::size_t n_classes = out.class_names.size();

  auto class_of = [&](const std::string& name) {
    auto it = class_index.find(name);
    if (it == class_index.end())
      throw std::runtime_error("unknown class in records file: " + name);
    return it->second;
  };

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (fields.size() != 4 + n_classes)
      throw std::runtime_error("bad row in records file: " + path);
    PredictionRecord r;
    if (!fields[0].empty()) {
      auto it = user_index.find(fields[0]);
      if (it == user_index.end()) {
        it = user_index.emplace(fields[0], static_cast<int>(out.user_names.size())).first;
        out.user_names.push_back(fields[0]);
      }
      r.user = it->second;
    }
    if (!fields[1].empty()) r.truth = class_of(fields[1]);
    if (!fields[2].empty()) r.point = class_of(fields[2]);
    if (!fields[3].empty()) {
      std::stringstream ss(fields[3]);
      std::string name;
      while (std::getline(ss, name, ';')) r.set.push_back(class_of(name));
      std::sort(r.set.begin(), r.set.end());
    }
    r.p_values.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      const std::string& s = fields[4 + c];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.p_values[c]);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("bad p-value in records file: " + s);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace confmu
