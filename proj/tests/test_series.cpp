#include <algorithm>
#include <cmath>
#include <random>

#include "admitcast/sarima.hpp"
#include "admitcast/series.hpp"
#include "doctest.h"

using namespace admitcast;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Eigen::VectorXd gaussian(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

// Fixed sample shared with the reference values below (scipy/statsmodels).
const Eigen::VectorXd kSkewed = vec({2.5024, 2.0058, 1.7189, 2.6183, 1.6628, 3.5736, 2.7097, 2.4438, 0.6959, 0.3607,
                                     0.7612, 2.8160, 2.4072, 0.5534, 2.7952, 1.2380, 1.2396, 4.6335, 2.2899, 2.6256,
                                     2.6504, 0.5414, 2.7383, 8.7191, 0.8225, 3.7913, 4.0693, 4.0275, 1.4066, 1.7059,
                                     0.8337, 2.1390, 5.4381, 1.2553, 0.2862, 2.3163, 4.0868, 1.8520, 6.7631, 1.9568});

}  // namespace

TEST_CASE("difference examples") {
  CHECK(difference(vec({1, 3, 6}), {1, 0, 1}).isApprox(vec({2, 3})));
  CHECK(difference(vec({1, 3, 6}), {0, 0, 1}) == vec({1, 3, 6}));

  const Eigen::VectorXd y = vec({1, 4, 9, 16, 25});
  const Eigen::VectorXd d2 = difference(y, {2, 0, 1});
  REQUIRE(d2.size() == 3);
  for (Eigen::Index t = 2; t < y.size(); ++t) CHECK(d2[t - 2] == doctest::Approx(y[t] - 2 * y[t - 1] + y[t - 2]));

  // seasonal first, then ordinary: length n - d - D*m
  CHECK(difference(gaussian(30, 1), {1, 1, 4}).size() == 25);
  CHECK_THROWS_AS(difference(vec({1, 2, 3}), {1, 1, 2}), DataError);
  CHECK_THROWS_AS(difference(vec({1, 2}), {-1, 0, 1}), std::invalid_argument);
}

TEST_CASE("differencing polynomial matches sequential differencing") {
  const std::vector<double> poly = differencing_polynomial({1, 1, 4});
  // (1 - B)(1 - B^4) = 1 - B - B^4 + B^5
  REQUIRE(poly.size() == 6);
  CHECK(poly == std::vector<double>{1, -1, 0, 0, -1, 1});
}

TEST_CASE("undifference inverts difference") {
  const Eigen::VectorXd x = vec({1, 3, 6, 10});
  CHECK(undifference(difference(x, {1, 0, 1}), {1, 0, 1}, x.head(1)).isApprox(x));
  CHECK(undifference(x, {0, 0, 1}, Eigen::VectorXd(0)) == x);
  CHECK_THROWS_AS(undifference(x, {1, 0, 1}, vec({1, 2})), std::invalid_argument);

  // Length-12 ramp with d = 1, D = 1, period 4 against a direct cumulative-sum
  // reconstruction.
  const Eigen::VectorXd ramp = Eigen::VectorXd::LinSpaced(12, 3.0, 25.0);
  const DifferenceSpec spec{1, 1, 4};
  const Eigen::VectorXd w = difference(ramp, spec);
  std::vector<double> seasonal(12, 0.0), rebuilt(12, 0.0);
  // seasonal differences z_t = y_t - y_{t-4} for t >= 4; w_t = z_t - z_{t-1} for t >= 5
  for (int t = 0; t < 5; ++t) rebuilt[t] = ramp[t];
  seasonal[4] = ramp[4] - ramp[0];
  for (int t = 5; t < 12; ++t) {
    seasonal[t] = seasonal[t - 1] + w[t - 5];
    rebuilt[t] = rebuilt[t - 4] + seasonal[t];
  }
  const Eigen::VectorXd via_api = undifference(w, spec, ramp.head(5));
  for (int t = 0; t < 12; ++t) {
    CHECK(rebuilt[t] == doctest::Approx(ramp[t]).epsilon(1e-12));
    CHECK(via_api[t] == doctest::Approx(rebuilt[t]).epsilon(1e-12));
  }
}

TEST_CASE("difference/undifference round trip on random series") {
  unsigned seed = 100;
  for (int period : {4, 12, 52}) {
    for (int D = 0; D <= 1; ++D) {
      for (int d = 0; d <= 4; ++d) {
        const DifferenceSpec spec{d, D, period};
        const Eigen::VectorXd x = 50.0 * gaussian(2 * period + 40, seed++);
        const Eigen::VectorXd back = undifference(difference(x, spec), spec, x.head(spec.lost()));
        // Repeated cumulative sums amplify rounding roughly like n^(d + D).
        const double tol = 1e-14 * x.cwiseAbs().maxCoeff() * std::pow(double(x.size()), d + D);
        CHECK((back - x).cwiseAbs().maxCoeff() <= std::max(tol, 1e-12));
      }
    }
  }
}

TEST_CASE("difference is generic over the scalar type") {
  Eigen::VectorXf x(4);
  x << 1.f, 3.f, 6.f, 10.f;
  const Eigen::VectorXf w = difference(x, {1, 0, 1});
  CHECK(w[2] == 4.f);
  CHECK(undifference(w, {1, 0, 1}, x.head(1)).isApprox(x));
}

TEST_CASE("acf definition and edge cases") {
  const Eigen::VectorXd alt = vec({1, -1, 1, -1});
  const auto r = acf(alt, 1);
  CHECK(r.values[0] == 1.0);
  CHECK(r.values[1] == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(r.ci_bound == doctest::Approx(1.96 / 2.0));
  CHECK_THROWS_AS(acf(vec({2, 2, 2, 2}), 1), DataError);
  CHECK_THROWS_AS(acf(vec({1}), 0), DataError);
  CHECK_THROWS_AS(acf(alt, 4), std::invalid_argument);

  // statsmodels.tsa.stattools.acf(x, nlags=5, fft=False)
  const Eigen::VectorXd ref =
      vec({1.0, -0.08443635962285051, -0.09484827367496314, 0.07763880083349528, -0.034236610147357086,
           -0.02981864313240862});
  const auto got = acf(kSkewed, 5).values;
  for (int j = 0; j <= 5; ++j) CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-12));
}

TEST_CASE("acf bounds and white-noise band") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto r = acf(gaussian(60, seed), 30).values;
    CHECK(r[0] == 1.0);
    CHECK(r.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
  }
  const Eigen::VectorXd noise = gaussian(1000, 4242);
  const auto r = acf(noise, 20);
  int outside = 0;
  for (int j = 1; j <= 20; ++j) outside += std::abs(r.values[j]) > r.ci_bound ? 1 : 0;
  CHECK(outside <= 2);
}

TEST_CASE("pacf base case and reference values") {
  const Eigen::VectorXd alt = vec({1, -1, 1, -1});
  CHECK(pacf(alt, 1).values[0] == doctest::Approx(-0.75));
  CHECK(pacf(kSkewed, 1).values[0] == doctest::Approx(acf(kSkewed, 1).values[1]).epsilon(1e-15));
  CHECK_THROWS_AS(pacf(alt, 0), std::invalid_argument);

  // statsmodels.tsa.stattools.pacf(x, nlags=5, method="ldb"), lags 1..5
  const Eigen::VectorXd ref = vec({-0.08443635962285051, -0.10271004363688697, 0.06121269388436926,
                                   -0.03221426143136169, -0.022633341567012837});
  const auto got = pacf(kSkewed, 5).values;
  for (int j = 0; j < 5; ++j) CHECK(got[j] == doctest::Approx(ref[j]).epsilon(1e-10));
}

TEST_CASE("pacf matches a direct Yule-Walker solve") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd x = gaussian(80, 900 + seed).cwiseProduct(Eigen::VectorXd::LinSpaced(80, 1.0, 2.0));
    const int max_lag = 8;
    const auto r = acf(x, max_lag).values;
    const auto dl = pacf(x, max_lag).values;
    for (int k = 1; k <= max_lag; ++k) {
      Eigen::MatrixXd toeplitz(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) toeplitz(i, j) = r[std::abs(i - j)];
      const Eigen::VectorXd phi = toeplitz.fullPivLu().solve(r.segment(1, k));
      CHECK(std::abs(phi[k - 1] - dl[k - 1]) < 1e-6);
    }
  }
}

TEST_CASE("pacf of a simulated AR(1) cuts off after lag 1") {
  SarimaSpec spec;
  spec.p = 1;
  SarimaParams params = SarimaParams::zeros(spec);
  params.phi[0] = 0.7;
  const TimeSeries x = simulate(spec, params, 2000, 11);
  const auto partial = pacf(x.values, 10);
  CHECK(partial.values[0] == doctest::Approx(0.7).epsilon(0.05));
  const double band = 2.0 / std::sqrt(2000.0);
  for (int k = 2; k <= 10; ++k) CHECK(std::abs(partial.values[k - 1]) < band);
}

TEST_CASE("seasonal table reshapes by cycle") {
  auto rows_in_cycle = [](const Eigen::Matrix<double, Eigen::Dynamic, 3>& table, int cycle) {
    return (table.col(0).array() == cycle).count();
  };
  const TimeSeries s104(Eigen::VectorXd::LinSpaced(104, 1, 104), 52);
  const auto t104 = seasonal_table(s104);
  CHECK(seasonal_cycle_count(104, 52) == 2);
  CHECK(rows_in_cycle(t104, 1) == 52);
  CHECK(rows_in_cycle(t104, 2) == 52);
  CHECK(t104(53, 1) == 2.0);

  const TimeSeries s244(Eigen::VectorXd::Zero(244), 52);
  const auto t244 = seasonal_table(s244);
  CHECK(seasonal_cycle_count(244, 52) == 5);
  for (int c = 1; c <= 4; ++c) CHECK(rows_in_cycle(t244, c) == 52);
  CHECK(rows_in_cycle(t244, 5) == 36);

  const TimeSeries s10(Eigen::VectorXd::Ones(10), 52);
  CHECK(seasonal_cycle_count(10, 52) == 1);
  CHECK(rows_in_cycle(seasonal_table(s10), 1) == 10);

  CHECK_THROWS_AS(seasonal_table(TimeSeries(Eigen::VectorXd::Ones(5), 1)), std::invalid_argument);
}

TEST_CASE("time series invariants") {
  CHECK_THROWS_AS(TimeSeries(Eigen::VectorXd(0), 52), DataError);
  CHECK_THROWS_AS(TimeSeries(vec({1, NAN, 2}), 1), DataError);
  CHECK_THROWS_AS(TimeSeries(vec({1, 2}), 0), std::invalid_argument);
}
