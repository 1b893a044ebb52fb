#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "admitcast/distributions.hpp"
#include "admitcast/errors.hpp"
#include "admitcast/series.hpp"
#include "admitcast/stat_tests.hpp"

namespace admitcast {

PValueBound PValueBound::exact(double v) { return {Kind::exact, std::clamp(v, 0.0, 1.0)}; }

std::string PValueBound::describe() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  switch (kind) {
    case Kind::at_most: return std::string("<= ") + buf;
    case Kind::at_least: return std::string(">= ") + buf;
    case Kind::exact: break;
  }
  return buf;
}

TestResult make_test_result(std::string name, double statistic, PValueBound p,
                            std::string null_hypothesis) {
  TestResult r;
  r.test_name = std::move(name);
  r.statistic = statistic;
  r.p_value = p;
  r.null_hypothesis = std::move(null_hypothesis);
  r.rejected_at_05 = p.value < 0.05;
  return r;
}

std::string to_string(Deterministic d) {
  switch (d) {
    case Deterministic::none: return "none";
    case Deterministic::constant: return "constant";
    case Deterministic::constant_and_trend: return "constant_and_trend";
  }
  return "unknown";
}

TestResult ljung_box(const Eigen::VectorXd& residuals, int m, int fitdf) {
  const auto n = residuals.size();
  if (m < 1) throw std::invalid_argument("ljung_box: lag count must be >= 1");
  if (m + 1 > n) throw DataError("ljung_box: need at least m + 1 residuals");
  if (fitdf < 0 || m <= fitdf)
    throw std::invalid_argument("ljung_box: lag count must exceed fitted parameter count");
  const auto r = acf(residuals, m).values;
  const double nn = static_cast<double>(n);
  double q = 0.0;
  for (int j = 1; j <= m; ++j) q += r[j] * r[j] / (nn - j);
  q *= nn * (nn + 2.0);
  return make_test_result("Ljung-Box", q, PValueBound::exact(dist::chi_squared_sf(q, m - fitdf)),
                          "residuals are independently distributed");
}

}  // namespace admitcast
