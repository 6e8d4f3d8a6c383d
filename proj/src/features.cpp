#include "confmu/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace confmu {

namespace {

double sample_std(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double pearson(std::span<const double> a, std::span<const double> b,
               double mean_a, double mean_b) {
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;  // constant axis: correlation undefined
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

std::vector<double> moving_average(std::span<const double> series, std::size_t width) {
  if (series.empty()) throw std::invalid_argument("moving_average: empty series");
  if (width < 1) throw std::invalid_argument("moving_average: width must be >= 1");
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t lo = i + 1 >= width ? i + 1 - width : 0;
    double acc = 0.0;
    for (std::size_t j = lo; j <= i; ++j) acc += series[j];
    out[i] = acc / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::array<double, kFeatureCount> extract_features(const SensorWindow& window) {
  const std::size_t n = window.samples.rows;
  if (n < 2) throw std::invalid_argument("extract_features: window too short");
  if (window.samples.cols != 3)
    throw std::invalid_argument("extract_features: expected 3 axes");

  std::array<std::vector<double>, 3> axis;
  for (int a = 0; a < 3; ++a) {
    axis[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) axis[a][i] = window.samples(i, a);
  }

  std::array<double, 3> mean{}, stdev{}, maxv{};
  for (int a = 0; a < 3; ++a) {
    double acc = 0.0;
    maxv[a] = axis[a][0];
    for (double x : axis[a]) {
      acc += x;
      maxv[a] = std::max(maxv[a], x);
    }
    mean[a] = acc / static_cast<double>(n);
    stdev[a] = sample_std(axis[a], mean[a]);
  }

  std::vector<double> mag(n);
  double auc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mag[i] = std::sqrt(axis[0][i] * axis[0][i] + axis[1][i] * axis[1][i] +
                       axis[2][i] * axis[2][i]);
    auc += mag[i];
  }
  double mag_mean = 0.0;
  for (double m : mag) mag_mean += m;
  mag_mean /= static_cast<double>(n);
  const double mag_std = sample_std(mag, mag_mean);

  double mean_diff = 0.0;
  for (int a = 0; a < 3; ++a) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += std::abs(axis[a][i + 1] - axis[a][i]);
    mean_diff += acc / static_cast<double>(n - 1);
  }
  mean_diff /= 3.0;

  return {mean[0],
          mean[1],
          mean[2],
          stdev[0],
          stdev[1],
          stdev[2],
          maxv[0],
          maxv[1],
          maxv[2],
          pearson(axis[0], axis[1], mean[0], mean[1]),
          pearson(axis[0], axis[2], mean[0], mean[2]),
          pearson(axis[1], axis[2], mean[1], mean[2]),
          mag_mean,
          mag_std,
          auc,
          mean_diff};
}

std::vector<std::string> feature_names(const std::string& prefix) {
  static const char* kNames[kFeatureCount] = {
      "mean_x",  "mean_y",  "mean_z",  "std_x",    "std_y",   "std_z",
      "max_x",   "max_y",   "max_z",   "corr_xy",  "corr_xz", "corr_yz",
      "mean_mag", "std_mag", "auc",     "mean_diff"};
  std::vector<std::string> out;
  out.reserve(kFeatureCount);
  for (const char* name : kNames) out.push_back(prefix + name);
  return out;
}

std::vector<SensorWindow> windowize(const std::vector<RawSample>& stream,
                                    std::size_t window_len) {
  if (window_len < 2) throw std::invalid_argument("windowize: window_len must be >= 2");
  std::vector<SensorWindow> out;
  for (std::size_t start = 0; start + window_len <= stream.size(); start += window_len) {
    bool uniform = true;
    for (std::size_t i = 1; i < window_len; ++i) {
      const RawSample& s = stream[start + i];
      if (s.cls != stream[start].cls || s.user != stream[start].user) {
        uniform = false;
        break;
      }
    }
    if (!uniform) continue;
    SensorWindow w;
    w.user = stream[start].user;
    w.cls = stream[start].cls;
    w.samples = Matrix(window_len, 3);
    for (std::size_t i = 0; i < window_len; ++i) {
      const RawSample& s = stream[start + i];
      w.samples(i, 0) = s.ax;
      w.samples(i, 1) = s.ay;
      w.samples(i, 2) = s.az;
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<RawSample> read_raw_stream_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open raw stream file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty raw stream file: " + path);
  std::vector<RawSample> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 6) continue;  // malformed row: drop
    RawSample s;
    s.user = fields[1];
    s.cls = fields[2];
    if (!parse_double(fields[0], s.timestamp) || !parse_double(fields[3], s.ax) ||
        !parse_double(fields[4], s.ay) || !parse_double(fields[5], s.az)) {
      continue;  // missing values: drop row
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace confmu
