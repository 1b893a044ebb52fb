#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "admitcast/errors.hpp"
#include "admitcast/stat_tests.hpp"

namespace admitcast {

namespace {

// Dickey-Fuller tau critical values, Fuller (1976) Table 8.5.2 as extended
// by Banerjee, Dolado, Galbraith and Hendry (1993), Table 4.2. Rows are sample
// sizes, columns the lower-tail probabilities in kDfProbs. The
// constant-and-trend block is the one shipped by R's tseries::adf.test.
constexpr std::array<double, 6> kDfSizes{25, 50, 100, 250, 500, 100000};
constexpr std::array<double, 8> kDfProbs{0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99};

using DfTable = std::array<std::array<double, 8>, 6>;

constexpr DfTable kDfNone{{
    {-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16},
    {-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08},
    {-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
    {-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00},
}};

constexpr DfTable kDfConstant{{
    {-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72},
    {-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66},
    {-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63},
    {-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62},
    {-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61},
    {-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60},
}};

constexpr DfTable kDfTrend{{
    {-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15},
    {-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24},
    {-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28},
    {-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31},
    {-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32},
    {-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33},
}};

// KPSS upper-tail critical values, Kwiatkowski et al. (1992) Table 1.
constexpr std::array<double, 4> kKpssProbs{0.10, 0.05, 0.025, 0.01};
constexpr std::array<double, 4> kKpssLevel{0.347, 0.463, 0.574, 0.739};
constexpr std::array<double, 4> kKpssTrend{0.119, 0.146, 0.176, 0.216};

const DfTable& df_table(Deterministic d) {
  switch (d) {
    case Deterministic::none: return kDfNone;
    case Deterministic::constant: return kDfConstant;
    case Deterministic::constant_and_trend: break;
  }
  return kDfTrend;
}

// Piecewise-linear interpolation of ys over increasing xs, clamped at the ends.
template <std::size_t N>
double interpolate(const std::array<double, N>& xs, const std::array<double, N>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

// Critical values at sample size n are interpolated per probability column,
// then the statistic is located among them.
PValueBound dickey_fuller_pvalue(double stat, double n, Deterministic d) {
  const DfTable& table = df_table(d);
  std::array<double, 8> crit{};
  for (std::size_t j = 0; j < kDfProbs.size(); ++j) {
    std::array<double, 6> column{};
    for (std::size_t i = 0; i < kDfSizes.size(); ++i) column[i] = table[i][j];
    crit[j] = interpolate(kDfSizes, column, n);
  }
  if (stat < crit.front()) return PValueBound::at_most(kDfProbs.front());
  if (stat > crit.back()) return PValueBound::at_least(kDfProbs.back());
  return PValueBound::exact(interpolate(crit, kDfProbs, stat));
}

PValueBound kpss_pvalue(double stat, Deterministic d) {
  const auto& crit = d == Deterministic::constant_and_trend ? kKpssTrend : kKpssLevel;
  if (stat > crit.back()) return PValueBound::at_most(kKpssProbs.back());
  if (stat < crit.front()) return PValueBound::at_least(kKpssProbs.front());
  return PValueBound::exact(interpolate(crit, kKpssProbs, stat));
}

int deterministic_columns(Deterministic d) {
  switch (d) {
    case Deterministic::none: return 0;
    case Deterministic::constant: return 1;
    case Deterministic::constant_and_trend: return 2;
  }
  return 0;
}

void fill_deterministic(Eigen::MatrixXd& x, Deterministic d) {
  const int k = deterministic_columns(d);
  if (k >= 1) x.col(0).setOnes();
  if (k >= 2) x.col(1) = Eigen::VectorXd::LinSpaced(x.rows(), 1.0, static_cast<double>(x.rows()));
}

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inv;
  double s2 = 0.0;  // RSS / (n - k)
};

OlsFit ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) throw DataError("unit-root regression matrix is singular");
  OlsFit fit;
  fit.beta = qr.solve(y);
  fit.residuals = y - x * fit.beta;
  fit.xtx_inv = (x.transpose() * x).inverse();
  fit.s2 = fit.residuals.squaredNorm() / static_cast<double>(x.rows() - x.cols());
  return fit;
}

int default_bandwidth(Eigen::Index n) {
  return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

// Bartlett-weighted long-run variance of u (divide-by-n autocovariances).
double long_run_variance(const Eigen::VectorXd& u, int bandwidth) {
  const auto n = u.size();
  double s = u.squaredNorm();
  for (int l = 1; l <= bandwidth && l < n; ++l) {
    const double w = 1.0 - static_cast<double>(l) / (bandwidth + 1.0);
    s += 2.0 * w * u.tail(n - l).dot(u.head(n - l));
  }
  return s / static_cast<double>(n);
}

void require_variation(const Eigen::VectorXd& x, const char* who) {
  if (x.size() > 0 && (x.array() == x[0]).all())
    throw DataError(std::string(who) + ": zero-variance series");
}

}  // namespace

TestResult adf_test(const Eigen::VectorXd& y, UnitRootHypothesis hypothesis,
                    std::optional<int> lag_order) {
  const auto n = y.size();
  const int k = lag_order.value_or(
      static_cast<int>(std::floor(std::cbrt(static_cast<double>(std::max<Eigen::Index>(n - 1, 0))))));
  if (k < 0) throw std::invalid_argument("adf_test: lag order must be >= 0");
  if (n < k + 10) throw DataError("adf_test: series too short for lag order " + std::to_string(k));
  require_variation(y, "adf_test");

  const Eigen::VectorXd dy = y.tail(n - 1) - y.head(n - 1);
  const Eigen::Index rows = dy.size() - k;
  const int det = deterministic_columns(hypothesis.deterministic);
  Eigen::MatrixXd x(rows, det + 1 + k);
  fill_deterministic(x, hypothesis.deterministic);
  // Row r is the equation for dy[k + r]; the lagged level is y[k + r].
  x.col(det) = y.segment(k, rows);
  for (int i = 1; i <= k; ++i) x.col(det + i) = dy.segment(k - i, rows);
  const Eigen::VectorXd target = dy.tail(rows);

  const OlsFit fit = ols(x, target);
  const double se = std::sqrt(fit.s2 * fit.xtx_inv(det, det));
  const double stat = fit.beta[det] / se;
  return make_test_result("Augmented Dickey-Fuller", stat,
                          dickey_fuller_pvalue(stat, static_cast<double>(rows), hypothesis.deterministic),
                          "a unit root is present");
}

TestResult kpss_test(const Eigen::VectorXd& y, UnitRootHypothesis hypothesis,
                     std::optional<int> bandwidth) {
  const auto n = y.size();
  if (hypothesis.deterministic == Deterministic::none)
    throw std::invalid_argument("kpss_test: needs a constant or constant-and-trend hypothesis");
  if (n < 10) throw DataError("kpss_test: series needs at least 10 observations");
  require_variation(y, "kpss_test");

  Eigen::MatrixXd x(n, deterministic_columns(hypothesis.deterministic));
  fill_deterministic(x, hypothesis.deterministic);
  const Eigen::VectorXd e = ols(x, y).residuals;

  double partial = 0.0;
  double eta = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    partial += e[t];
    eta += partial * partial;
  }
  const double nn = static_cast<double>(n);
  eta /= nn * nn;
  const int l = bandwidth.value_or(default_bandwidth(n));
  const double s2 = long_run_variance(e, l);
  if (!(s2 > 0.0)) throw DataError("kpss_test: residual long-run variance is zero");
  const double stat = eta / s2;
  const bool trend = hypothesis.deterministic == Deterministic::constant_and_trend;
  return make_test_result("KPSS", stat, kpss_pvalue(stat, hypothesis.deterministic),
                          trend ? "series is trend-stationary" : "series is level-stationary");
}

TestResult pp_test(const Eigen::VectorXd& y, UnitRootHypothesis hypothesis,
                   std::optional<int> bandwidth) {
  const auto n = y.size();
  if (n < 10) throw DataError("pp_test: series needs at least 10 observations");
  require_variation(y, "pp_test");

  const Eigen::Index rows = n - 1;
  const int det = deterministic_columns(hypothesis.deterministic);
  Eigen::MatrixXd x(rows, det + 1);
  fill_deterministic(x, hypothesis.deterministic);
  x.col(det) = y.head(rows);
  const Eigen::VectorXd target = y.tail(rows);
  const OlsFit fit = ols(x, target);

  const double t = static_cast<double>(rows);
  const double se_rho = std::sqrt(fit.s2 * fit.xtx_inv(det, det));
  const double t_rho = (fit.beta[det] - 1.0) / se_rho;
  const double gamma0 = fit.residuals.squaredNorm() / t;
  const int l = bandwidth.value_or(default_bandwidth(rows));
  const double lambda2 = long_run_variance(fit.residuals, l);
  const double lambda = std::sqrt(lambda2);
  const double s = std::sqrt(fit.s2);
  const double stat =
      std::sqrt(gamma0 / lambda2) * t_rho - (lambda2 - gamma0) / (2.0 * lambda) * (t * se_rho / s);
  return make_test_result("Phillips-Perron", stat, dickey_fuller_pvalue(stat, t, hypothesis.deterministic),
                          "a unit root is present");
}

}  // namespace admitcast
