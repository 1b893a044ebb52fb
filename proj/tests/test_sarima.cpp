#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include "admitcast/errors.hpp"
#include "admitcast/sarima.hpp"
#include "admitcast/stat_tests.hpp"
#include "doctest.h"

using namespace admitcast;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

SarimaSpec make_spec(int p, int d, int q, int P = 0, int D = 0, int Q = 0, int period = 1, bool drift = false) {
  SarimaSpec s;
  s.p = p, s.d = d, s.q = q, s.P = P, s.D = D, s.Q = Q, s.period = period, s.include_drift = drift;
  return s;
}

// Dense multivariate normal log-density of the differenced series, with the
// autocovariance taken from a long truncated MA(infinity) expansion.
double dense_loglik(const SarimaSpec& spec, const SarimaParams& prm, const TimeSeries& y) {
  const int m = spec.period;
  Eigen::VectorXd ar = Eigen::VectorXd::Zero(spec.p + m * spec.P);
  Eigen::VectorXd ma = Eigen::VectorXd::Zero(spec.q + m * spec.Q);
  // Multiply the regular and seasonal polynomials directly.
  Eigen::VectorXd a1 = Eigen::VectorXd::Zero(spec.p + 1), a2 = Eigen::VectorXd::Zero(m * spec.P + 1);
  a1[0] = a2[0] = 1.0;
  for (int i = 0; i < spec.p; ++i) a1[i + 1] = -prm.phi[i];
  for (int i = 0; i < spec.P; ++i) a2[m * (i + 1)] = -prm.seasonal_phi[i];
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(spec.q + 1), b2 = Eigen::VectorXd::Zero(m * spec.Q + 1);
  b1[0] = b2[0] = 1.0;
  for (int i = 0; i < spec.q; ++i) b1[i + 1] = prm.theta[i];
  for (int i = 0; i < spec.Q; ++i) b2[m * (i + 1)] = prm.seasonal_theta[i];
  for (Eigen::Index i = 0; i < a1.size(); ++i)
    for (Eigen::Index j = 0; j < a2.size(); ++j)
      if (i + j > 0) ar[i + j - 1] -= a1[i] * a2[j];
  for (Eigen::Index i = 0; i < b1.size(); ++i)
    for (Eigen::Index j = 0; j < b2.size(); ++j)
      if (i + j > 0) ma[i + j - 1] += b1[i] * b2[j];

  const Eigen::VectorXd w0 = difference(y.values, spec.differencing());
  const double shift = spec.include_drift ? prm.mu_or_drift * spec.constant_scale() : 0.0;
  const Eigen::VectorXd w = w0.array() - shift;
  const auto n = w.size();
  const Eigen::VectorXd psi = psi_weights(ar, ma, 6000);
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      cov(i, j) = cov(j, i) = prm.sigma2 * psi.head(psi.size() - (j - i)).dot(psi.tail(psi.size() - (j - i)));
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::VectorXd z = llt.matrixL().solve(w);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + logdet + z.squaredNorm());
}

}  // namespace

TEST_CASE("white-noise likelihood closed form") {
  const TimeSeries y(vec({0.3, -1.2, 0.8, 2.0, -0.4}), 1);
  const SarimaSpec spec = make_spec(0, 0, 0);
  const double s2 = 1.7;
  const double expected = -0.5 * 5 * std::log(2 * std::numbers::pi * s2) - y.values.squaredNorm() / (2 * s2);
  CHECK(loglik(spec, SarimaParams::zeros(spec, s2), y) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("AR(1) exact likelihood closed form") {
  const TimeSeries y(vec({0.5, 1.1, 0.2, -0.7, -1.5, 0.4, 0.9}), 1);
  const SarimaSpec spec = make_spec(1, 0, 0);
  SarimaParams prm = SarimaParams::zeros(spec, 0.8);
  prm.phi[0] = 0.6;
  const double phi = 0.6, s2 = 0.8;
  const double v1 = s2 / (1 - phi * phi);
  double expected = -0.5 * (std::log(2 * std::numbers::pi * v1) + y.values[0] * y.values[0] / v1);
  for (Eigen::Index t = 1; t < y.size(); ++t) {
    const double e = y.values[t] - phi * y.values[t - 1];
    expected -= 0.5 * (std::log(2 * std::numbers::pi * s2) + e * e / s2);
  }
  CHECK(loglik(spec, prm, y) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Kalman likelihood agrees with the dense Gaussian density") {
  const TimeSeries base = simulate(make_spec(1, 0, 1), [] {
    SarimaParams p = SarimaParams::zeros(make_spec(1, 0, 1));
    p.phi[0] = 0.5;
    p.theta[0] = 0.3;
    return p;
  }(), 60, 5);

  struct Case {
    SarimaSpec spec;
    SarimaParams params;
  };
  std::vector<Case> cases;
  {
    SarimaSpec s = make_spec(2, 0, 1);
    SarimaParams p = SarimaParams::zeros(s, 1.3);
    p.phi << 0.4, -0.3;
    p.theta << 0.6;
    cases.push_back({s, p});
  }
  {
    SarimaSpec s = make_spec(0, 1, 2, 0, 0, 0, 1, true);
    SarimaParams p = SarimaParams::zeros(s, 0.7);
    p.theta << -0.5, 0.2;
    p.mu_or_drift = 0.1;
    cases.push_back({s, p});
  }
  {
    SarimaSpec s = make_spec(1, 0, 1, 1, 0, 1, 4, true);
    SarimaParams p = SarimaParams::zeros(s, 0.9);
    p.phi << 0.3;
    p.theta << -0.4;
    p.seasonal_phi << 0.5;
    p.seasonal_theta << -0.3;
    p.mu_or_drift = 0.2;
    cases.push_back({s, p});
  }
  {
    SarimaSpec s = make_spec(2, 0, 2, 1, 1, 1, 6, true);
    SarimaParams p = SarimaParams::zeros(s, 1.1);
    p.phi << -0.03, 0.55;
    p.theta << 0.09, -0.58;
    p.seasonal_phi << -0.11;
    p.seasonal_theta << -0.42;
    p.mu_or_drift = 0.14;
    cases.push_back({s, p});
  }
  for (const auto& c : cases) {
    INFO(c.spec.label());
    CHECK(loglik(c.spec, c.params, base) == doctest::Approx(dense_loglik(c.spec, c.params, base)).epsilon(1e-8));
  }
}

TEST_CASE("information criteria arithmetic") {
  const InformationCriteria ic = information_criteria(-100.91, 6, 50);
  CHECK(ic.aic == doctest::Approx(213.82).epsilon(1e-12));
  CHECK(ic.bic == doctest::Approx(201.82 + 6 * std::log(50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(information_criteria(-1, 0, 10), std::invalid_argument);
}

TEST_CASE("spec validation, labels and admissibility") {
  CHECK(make_spec(2, 0, 2, 1, 1, 1, 52, true).label() == "ARIMA(2,0,2)(1,1,1)[52] with drift");
  CHECK(make_spec(1, 0, 0, 0, 0, 0, 1, true).label() == "ARIMA(1,0,0) with non-zero mean");
  CHECK_THROWS_AS(make_spec(0, 1, 0, 0, 1, 0, 4, true).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(-1, 0, 0).validate(), std::invalid_argument);
  CHECK(coefficient_labels(make_spec(1, 0, 1, 1, 1, 1, 52, true)) ==
        std::vector<std::string>{"ar1", "ma1", "sar1", "sma1", "drift"});

  const SarimaSpec s = make_spec(1, 0, 1);
  SarimaParams p = SarimaParams::zeros(s);
  p.phi[0] = 1.0;
  CHECK_THROWS_AS(check_admissible(s, p), std::invalid_argument);
  p.phi[0] = 0.5;
  p.theta[0] = -1.2;
  CHECK_THROWS_AS(check_admissible(s, p), std::invalid_argument);
  CHECK(is_stationary_polynomial(vec({0.5, 0.3})));
  CHECK_FALSE(is_stationary_polynomial(vec({0.5, 0.6})));

  const Eigen::VectorXd c = vec({0.1, 0.2, 0.3});
  const SarimaSpec s2 = make_spec(1, 0, 1, 0, 0, 0, 1, true);
  CHECK(SarimaParams::from_coefficients(s2, c, 2.0).coefficients(s2) == c);
}

TEST_CASE("fit recovers AR(1) and reports consistent statistics") {
  const SarimaSpec spec = make_spec(1, 0, 0, 0, 0, 0, 1, true);
  SarimaParams truth = SarimaParams::zeros(spec, 4.0);
  truth.phi[0] = 0.6;
  truth.mu_or_drift = 10.0;
  const TimeSeries y = simulate(spec, truth, 1000, 99);
  const SarimaFit f = fit(spec, y);
  CHECK(f.converged);
  CHECK(std::abs(f.params.phi[0] - 0.6) < 3 * f.std_errors[0]);
  CHECK(f.std_errors[0] == doctest::Approx(std::sqrt((1 - 0.36) / 1000.0)).epsilon(0.1));
  CHECK(std::abs(f.params.mu_or_drift - 10.0) < 3 * f.std_errors[1]);
  CHECK(f.params.sigma2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(f.k() == 3);
  CHECK(f.loglik >= f.start_loglik);
  CHECK(f.loglik == doctest::Approx(loglik(spec, f.params, y)).epsilon(1e-10));
  CHECK(f.aic == doctest::Approx(-2 * f.loglik + 6).epsilon(1e-12));
  CHECK(f.residuals.size() == 1000);
  // The simplex stops at a relative tolerance of about 1e-8, so the gradient
  // is small relative to the log-likelihood but not zero.
  CHECK(loglik_gradient(f).cwiseAbs().maxCoeff() < 1e-3 * (1 + std::abs(f.loglik)));
}

TEST_CASE("fit of a seasonal model with drift") {
  const SarimaSpec spec = make_spec(1, 0, 0, 0, 1, 1, 12, true);
  SarimaParams truth = SarimaParams::zeros(spec, 1.0);
  truth.phi[0] = 0.5;
  truth.seasonal_theta[0] = -0.5;
  truth.mu_or_drift = 0.3;
  const TimeSeries y = simulate(spec, truth, 400, 7);
  const SarimaFit f = fit(spec, y);
  const Eigen::VectorXd c = f.params.coefficients(spec);
  const Eigen::VectorXd t = truth.coefficients(spec);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    INFO(f.labels[static_cast<std::size_t>(i)]);
    CHECK(std::abs(c[i] - t[i]) < 4 * f.std_errors[i]);
  }
  CHECK(f.n_effective == 388);
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit(make_spec(1, 0, 1), TimeSeries(Eigen::VectorXd::LinSpaced(8, 0, 1), 1)), DataError);
  // Integer ramp: the first difference is exactly constant.
  CHECK_THROWS_AS(fit(make_spec(1, 1, 0), TimeSeries(Eigen::VectorXd::LinSpaced(40, 0, 39), 1)), DataError);
}

TEST_CASE("forecast closed forms") {
  const TimeSeries noise = simulate(make_spec(0, 0, 0), SarimaParams::zeros(make_spec(0, 0, 0), 2.0), 200, 3);

  SUBCASE("white noise with mean") {
    const SarimaFit f = fit(make_spec(0, 0, 0, 0, 0, 0, 1, true), noise);
    const ForecastResult fc = forecast(f, 5, {0.8, 0.95});
    for (int i = 0; i < 5; ++i) {
      CHECK(fc.point[i] == doctest::Approx(f.params.mu_or_drift).epsilon(1e-10));
      CHECK(fc.sigma_h[i] == doctest::Approx(std::sqrt(f.params.sigma2)).epsilon(1e-12));
      CHECK(fc.upper(i, 1) - fc.point[i] == doctest::Approx(1.959963984540054 * fc.sigma_h[i]).epsilon(1e-10));
    }
    CHECK(f.params.mu_or_drift == doctest::Approx(noise.values.mean()).epsilon(1e-4));
  }
  SUBCASE("random walk") {
    Eigen::VectorXd walk = noise.values;
    for (Eigen::Index t = 1; t < walk.size(); ++t) walk[t] += walk[t - 1];
    const SarimaFit f = fit(make_spec(0, 1, 0), TimeSeries(walk, 1));
    const ForecastResult fc = forecast(f, 6, {0.95});
    for (int i = 0; i < 6; ++i) {
      CHECK(fc.point[i] == doctest::Approx(walk[walk.size() - 1]).epsilon(1e-12));
      CHECK(fc.sigma_h[i] == doctest::Approx(std::sqrt(f.params.sigma2 * (i + 1))).epsilon(1e-12));
    }
  }
  SUBCASE("random walk with drift") {
    Eigen::VectorXd walk = noise.values;
    for (Eigen::Index t = 1; t < walk.size(); ++t) walk[t] += walk[t - 1] + 0.5;
    const SarimaFit f = fit(make_spec(0, 1, 0, 0, 0, 0, 1, true), TimeSeries(walk, 1));
    const double slope = (walk[walk.size() - 1] - walk[0]) / (walk.size() - 1.0);
    CHECK(f.params.mu_or_drift == doctest::Approx(slope).epsilon(1e-4));
    const ForecastResult fc = forecast(f, 3, {0.9});
    for (int i = 0; i < 3; ++i)
      CHECK(fc.point[i] == doctest::Approx(walk[walk.size() - 1] + (i + 1) * f.params.mu_or_drift).epsilon(1e-10));
  }
  SUBCASE("AR(1) point forecasts decay geometrically to the mean") {
    SarimaSpec spec = make_spec(1, 0, 0, 0, 0, 0, 1, true);
    SarimaParams prm = SarimaParams::zeros(spec, 1.0);
    prm.phi[0] = 0.7;
    prm.mu_or_drift = 5.0;
    const SarimaFit f = fit(spec, simulate(spec, prm, 300, 8));
    const ForecastResult fc = forecast(f, 4, {0.95});
    const double mu = f.params.mu_or_drift, phi = f.params.phi[0];
    const double last = f.history.values[f.history.size() - 1];
    for (int i = 0; i < 4; ++i)
      CHECK(fc.point[i] == doctest::Approx(mu + std::pow(phi, i + 1) * (last - mu)).epsilon(1e-10));
  }
}

TEST_CASE("forecast intervals are nested and widen") {
  const SarimaSpec spec = make_spec(1, 0, 1, 0, 1, 1, 12, true);
  SarimaParams prm = SarimaParams::zeros(spec, 1.0);
  prm.phi << 0.4;
  prm.theta << 0.2;
  prm.seasonal_theta << -0.4;
  prm.mu_or_drift = 0.05;
  const SarimaFit f = fit(spec, simulate(spec, prm, 200, 12));
  const ForecastResult fc = forecast(f, 30, {0.5, 0.8, 0.95});
  for (int i = 0; i < 30; ++i) {
    CHECK(fc.lower(i, 2) <= fc.lower(i, 1));
    CHECK(fc.lower(i, 1) <= fc.lower(i, 0));
    CHECK(fc.lower(i, 0) <= fc.point[i]);
    CHECK(fc.point[i] <= fc.upper(i, 0));
    CHECK(fc.upper(i, 0) <= fc.upper(i, 1));
    CHECK(fc.upper(i, 1) <= fc.upper(i, 2));
    if (i > 0) CHECK(fc.sigma_h[i] >= fc.sigma_h[i - 1]);
  }
  CHECK_THROWS_AS(forecast(f, 0, {0.95}), std::invalid_argument);
  CHECK_THROWS_AS(forecast(f, 3, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(forecast(f, 3, {}), std::invalid_argument);
}

TEST_CASE("simulate is deterministic and respects the model") {
  const SarimaSpec spec = make_spec(1, 0, 0);
  SarimaParams prm = SarimaParams::zeros(spec);
  prm.phi[0] = 0.9;
  const TimeSeries a = simulate(spec, prm, 2000, 42);
  const TimeSeries b = simulate(spec, prm, 2000, 42);
  const TimeSeries c = simulate(spec, prm, 2000, 43);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  const double r1 = acf(a.values, 1).values[1];
  CHECK(r1 >= 0.86);
  CHECK(r1 <= 0.94);

  const SarimaSpec seasonal = make_spec(0, 1, 0, 0, 1, 0, 4);
  const TimeSeries s = simulate(seasonal, SarimaParams::zeros(seasonal), 20, 1);
  CHECK(s.size() == 20);
  CHECK(s.values.head(5).isZero());
  CHECK_THROWS_AS(simulate(seasonal, SarimaParams::zeros(seasonal), 5, 1), std::invalid_argument);
  SarimaParams bad = SarimaParams::zeros(spec);
  bad.phi[0] = 1.5;
  CHECK_THROWS_AS(simulate(spec, bad, 100, 1), std::invalid_argument);
}

TEST_CASE("psi weights") {
  const Eigen::VectorXd psi = psi_weights(vec({0.5}), vec({0.4}), 4);
  CHECK(psi[0] == 1.0);
  CHECK(psi[1] == doctest::Approx(0.9));
  CHECK(psi[2] == doctest::Approx(0.45));
  CHECK(psi[3] == doctest::Approx(0.225));
}

TEST_CASE("residuals of a correctly specified fit look white") {
  const SarimaSpec spec = make_spec(1, 0, 1);
  SarimaParams prm = SarimaParams::zeros(spec);
  prm.phi << 0.5;
  prm.theta << 0.3;
  int passed = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SarimaFit f = fit(spec, simulate(spec, prm, 200, 500 + seed));
    passed += ljung_box(f.residuals, 10, 2).rejected_at_05 ? 0 : 1;
  }
  CHECK(passed >= 45);
}
