#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "confmu/matrix.hpp"

namespace confmu {

// One fixed-length chunk of tri-axial accelerometer samples carrying a
// single user and class.
struct SensorWindow {
  Matrix samples;  // window_len x 3
  std::string user;
  std::string cls;
};

struct RawSample {
  double timestamp = 0.0;
  std::string user;
  std::string cls;
  double ax = 0.0, ay = 0.0, az = 0.0;
};

// Trailing moving average: out[i] = mean(series[max(0,i-width+1) .. i]).
// Output has the same length as the input.
std::vector<double> moving_average(std::span<const double> series, std::size_t width);

constexpr std::size_t kFeatureCount = 16;

// Per-window feature vector, in order: mean x/y/z, sample std x/y/z,
// max x/y/z, Pearson corr xy/xz/yz (0 when an axis is constant),
// mean magnitude, std magnitude, area under the curve (sum of magnitudes),
// mean absolute difference between consecutive readings (averaged over axes).
std::array<double, kFeatureCount> extract_features(const SensorWindow& window);

std::vector<std::string> feature_names(const std::string& prefix = "");

// Consecutive non-overlapping chunks of `window_len` samples. A window is
// kept only when all its samples share one class and one user; the trailing
// partial window is dropped.
std::vector<SensorWindow> windowize(const std::vector<RawSample>& stream,
                                    std::size_t window_len);

std::vector<RawSample> read_raw_stream_csv(const std::string& path);

}  // namespace confmu
