// Writes the bundled synthetic weekly admissions sample.
//
//   make_sample [output.csv]
//
// A seasonal ARIMA path with the reference model's orders, plus a fixed
// annual profile so the first year is not flat.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "admitcast/dataset.hpp"
#include "admitcast/pipeline.hpp"
#include "admitcast/sarima.hpp"

int main(int argc, char** argv) {
  using namespace admitcast;
  constexpr int kWeeks = 244;
  constexpr int kPeriod = 52;
  constexpr std::uint64_t kSeed = 20160311;

  const SarimaSpec spec = reference_spec(kPeriod);
  SarimaParams params = SarimaParams::zeros(spec, 40.0 * 40.0);
  params.phi << -0.03, 0.55;
  params.theta << 0.09, -0.58;
  params.seasonal_phi << -0.11;
  params.seasonal_theta << -0.42;
  params.mu_or_drift = 0.14;

  // The simulator starts its seasonal sum from a zero year; drop that year.
  const TimeSeries path = simulate(spec, params, kWeeks + kPeriod, kSeed);
  const Eigen::VectorXd tail = path.values.tail(kWeeks);

  std::ofstream file;
  if (argc > 1) file.open(argv[1], std::ios::binary | std::ios::trunc);
  std::ostream& out = argc > 1 ? static_cast<std::ostream&>(file) : std::cout;
  if (!out) {
    std::cerr << "cannot open output\n";
    return 1;
  }
  const auto start = parse_iso_date("2012-03-01");
  out << "week_start_date,admissions\n";
  for (int t = 0; t < kWeeks; ++t) {
    const double phase = 2.0 * std::numbers::pi * (t % kPeriod) / kPeriod;
    const double profile = 400.0 + 45.0 * std::cos(phase) + 20.0 * std::sin(2.0 * phase);
    const double value = std::max(0.0, std::round(profile + tail[t]));
    out << format_iso_date(start + std::chrono::days{7 * t}) << ',' << static_cast<long>(value) << '\n';
  }
  return 0;
}
