#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "admitcast/sarima.hpp"
#include "admitcast/selection.hpp"
#include "admitcast/stat_tests.hpp"

namespace admitcast {

struct Provenance {
  std::string input_sha256;
  std::uint64_t seed = 0;
  std::string version = ADMITCAST_VERSION;
  int period = 52;
  Eigen::Index train_length = 0;
  Eigen::Index test_length = 0;
};

struct Diagnostics {
  std::string subject;  // what the tests were run on
  std::vector<TestResult> tests;
};

struct ForecastSection {
  Eigen::Index first_index = 1;  // 1-based position of the first forecast week
  ForecastResult result;
};

// Every section is optional so partial runs (fit, diagnose) share one writer.
struct RunReport {
  std::optional<Diagnostics> diagnostics;
  std::optional<ComparisonReport> comparison;
  std::optional<SarimaFit> model;
  std::optional<ForecastSection> forecast;
  Provenance provenance;
};

enum class ReportFormat { json, csv };

// Sorted keys, numbers rounded to 6 significant digits, NaN as null.
std::string report_json(const RunReport& report);

// One CSV document per present section, keyed by section name.
std::vector<std::pair<std::string, std::string>> report_csv(const RunReport& report);

// JSON writes `path`; CSV writes <stem>_<section>.csv beside it and returns
// the files written.
std::vector<std::filesystem::path> emit_report(const RunReport& report, ReportFormat format,
                                               const std::filesystem::path& path);

// Value rounded to 6 significant digits.
double round_significant(double value);

}  // namespace admitcast
