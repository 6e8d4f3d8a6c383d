#pragma once

#include <cstddef>
#include <string>

#include "confmu/dataset.hpp"

namespace confmu {

// Preprocessed-dataset CSV: header `user,class,<feature...>`, UTF-8,
// comma-separated, `.` decimal. Rows with missing or non-numeric feature
// values are dropped while reading.
MultiUserDataset read_preprocessed_csv(const std::string& path);
void write_preprocessed_csv(const MultiUserDataset& data, const std::string& path);

// Removes every user that has fewer than `min_count` instances for any class
// that user performed, then rebuilds the class/user vocabularies from the
// surviving rows. Throws if no user survives.
MultiUserDataset filter_min_instances(const MultiUserDataset& data, std::size_t min_count = 5);

// Raw sensor-stream ingestion options (one CSV per sensor, columns
// timestamp,user,class,ax,ay,az; sensors join on row position).
struct RawStreamOptions {
  std::size_t window_len = 150;
  std::size_t filter_width = 10;
  std::string second_sensor_path;  // empty = single sensor
};

MultiUserDataset ingest_raw_stream(const std::string& path, const RawStreamOptions& options);

}  // namespace confmu
