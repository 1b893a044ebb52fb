#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "admitcast/series.hpp"

namespace admitcast {

struct CsvOptions {
  // Empty disables the date checks; rows are then taken positionally.
  std::string date_column = "week_start_date";
  std::string value_column = "admissions";
  int period = 52;
};

struct Dataset {
  TimeSeries series;
  std::vector<std::chrono::sys_days> dates;  // empty when no date column is used
  std::string sha256;                        // hex digest of the raw file bytes
};

// Parses a weekly admissions CSV. Every rejection is a DataError whose
// message names the file and line.
Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options = {});
TimeSeries load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Parses "YYYY-MM-DD"; throws std::invalid_argument otherwise.
std::chrono::sys_days parse_iso_date(const std::string& text);
std::string format_iso_date(std::chrono::sys_days day);

// First train_len observations and the remainder.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& series, Eigen::Index train_len);

std::string sha256_hex(const std::string& bytes);

}  // namespace admitcast
