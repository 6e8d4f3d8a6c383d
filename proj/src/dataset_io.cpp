#include "confmu/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "confmu/features.hpp"

namespace confmu {

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

bool parse_value(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

int intern(std::vector<std::string>& names,
           std::unordered_map<std::string, int>& index, const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  const int id = static_cast<int>(names.size());
  names.push_back(name);
  index.emplace(name, id);
  return id;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MultiUserDataset read_preprocessed_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  auto header = split_line(line);
  if (header.size() < 3 || header[0] != "user" || header[1] != "class")
    throw std::runtime_error("bad header in dataset file: " + path);

  MultiUserDataset data;
  data.feature_names.assign(header.begin() + 2, header.end());
  const std::size_t d = data.feature_names.size();
  std::unordered_map<std::string, int> class_index, user_index;
  std::vector<double> row(d);

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    if (fields.size() != d + 2) continue;  // malformed/short row: drop
    bool ok = true;
    for (std::size_t j = 0; j < d; ++j) {
      if (!parse_value(fields[j + 2], row[j])) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;  // missing value: drop row
    data.users.push_back(intern(data.user_names, user_index, fields[0]));
    data.labels.push_back(intern(data.class_names, class_index, fields[1]));
    data.features.data.insert(data.features.data.end(), row.begin(), row.end());
  }
  data.features.cols = d;
  data.features.rows = data.labels.size();
  if (data.features.rows == 0)
    throw std::runtime_error("no usable rows in dataset file: " + path);
  validate_dataset(data);
  return data;
}

void write_preprocessed_csv(const MultiUserDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << "user,class";
  for (const auto& name : data.feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.user_names[data.users[i]] << ',' << data.class_names[data.labels[i]];
    auto row = data.features.row(i);
    for (double v : row) out << ',' << format_value(v);
    out << '\n';
  }
}

MultiUserDataset filter_min_instances(const MultiUserDataset& data, std::size_t min_count) {
  // counts[user][class]
  std::vector<std::map<int, std::size_t>> counts(data.n_users());
  for (std::size_t i = 0; i < data.size(); ++i) counts[data.users[i]][data.labels[i]]++;

  std::vector<bool> keep_user(data.n_users(), true);
  for (std::size_t u = 0; u < data.n_users(); ++u) {
    for (const auto& [cls, cnt] : counts[u]) {
      if (cnt < min_count) {
        keep_user[u] = false;
        break;
      }
    }
  }

  MultiUserDataset out;
  out.feature_names = data.feature_names;
  std::unordered_map<std::string, int> class_index, user_index;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!keep_user[data.users[i]]) continue;
    out.users.push_back(intern(out.user_names, user_index, data.user_names[data.users[i]]));
    out.labels.push_back(intern(out.class_names, class_index, data.class_names[data.labels[i]]));
    auto row = data.features.row(i);
    out.features.data.insert(out.features.data.end(), row.begin(), row.end());
  }
  out.features.cols = data.n_features();
  out.features.rows = out.labels.size();
  if (out.user_names.empty())
    throw std::runtime_error("no users survive the minimum-instances filter");
  return out;
}

MultiUserDataset ingest_raw_stream(const std::string& path, const RawStreamOptions& options) {
  const bool two_sensors = !options.second_sensor_path.empty();
  std::vector<std::vector<RawSample>> streams;
  streams.push_back(read_raw_stream_csv(path));
  if (two_sensors) streams.push_back(read_raw_stream_csv(options.second_sensor_path));

  if (two_sensors) {
    if (streams[0].size() != streams[1].size())
      throw std::runtime_error("sensor streams differ in length");
    for (std::size_t i = 0; i < streams[0].size(); ++i) {
      if (streams[0][i].user != streams[1][i].user ||
          streams[0][i].cls != streams[1][i].cls)
        throw std::runtime_error("sensor streams disagree on user/class at row " +
                                 std::to_string(i));
    }
  }

  // Smooth each axis, then cut windows; a window mixing classes or users is
  // dropped in windowize.
  std::vector<std::vector<SensorWindow>> windows_per_sensor;
  for (auto& stream : streams) {
    if (options.filter_width > 1 && !stream.empty()) {
      std::array<std::vector<double>, 3> axis;
      for (int a = 0; a < 3; ++a) axis[a].resize(stream.size());
      for (std::size_t i = 0; i < stream.size(); ++i) {
        axis[0][i] = stream[i].ax;
        axis[1][i] = stream[i].ay;
        axis[2][i] = stream[i].az;
      }
      for (int a = 0; a < 3; ++a) axis[a] = moving_average(axis[a], options.filter_width);
      for (std::size_t i = 0; i < stream.size(); ++i) {
        stream[i].ax = axis[0][i];
        stream[i].ay = axis[1][i];
        stream[i].az = axis[2][i];
      }
    }
    windows_per_sensor.push_back(windowize(stream, options.window_len));
  }

  const auto& windows = windows_per_sensor[0];
  if (windows.empty()) throw std::runtime_error("raw stream produced no usable windows");
  if (two_sensors && windows_per_sensor[1].size() != windows.size())
    throw std::runtime_error("sensor streams produced different window counts");

  MultiUserDataset data;
  data.feature_names = two_sensors ? feature_names("s1_") : feature_names();
  if (two_sensors) {
    auto second = feature_names("s2_");
    data.feature_names.insert(data.feature_names.end(), second.begin(), second.end());
  }
  const std::size_t d = data.feature_names.size();
  std::unordered_map<std::string, int> class_index, user_index;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    auto feats = extract_features(windows[w]);
    data.users.push_back(intern(data.user_names, user_index, windows[w].user));
    data.labels.push_back(intern(data.class_names, class_index, windows[w].cls));
    data.features.data.insert(data.features.data.end(), feats.begin(), feats.end());
    if (two_sensors) {
      auto feats2 = extract_features(windows_per_sensor[1][w]);
      data.features.data.insert(data.features.data.end(), feats2.begin(), feats2.end());
    }
  }
  data.features.cols = d;
  data.features.rows = data.labels.size();
  validate_dataset(data);
  return data;
}

}  // namespace confmu
