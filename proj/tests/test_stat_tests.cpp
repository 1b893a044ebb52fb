#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "admitcast/errors.hpp"
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

Eigen::VectorXd gaussian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

Eigen::VectorXd exponential(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> dist(1.0);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

Eigen::VectorXd random_walk(Eigen::Index n, std::uint64_t seed) {
  Eigen::VectorXd e = gaussian(n, seed);
  for (Eigen::Index t = 1; t < n; ++t) e[t] += e[t - 1];
  return e;
}

// Gamma(2, 1.5) draws shared with the scipy/statsmodels reference values.
const Eigen::VectorXd kSkewed = vec({2.5024, 2.0058, 1.7189, 2.6183, 1.6628, 3.5736, 2.7097, 2.4438, 0.6959, 0.3607,
                                     0.7612, 2.8160, 2.4072, 0.5534, 2.7952, 1.2380, 1.2396, 4.6335, 2.2899, 2.6256,
                                     2.6504, 0.5414, 2.7383, 8.7191, 0.8225, 3.7913, 4.0693, 4.0275, 1.4066, 1.7059,
                                     0.8337, 2.1390, 5.4381, 1.2553, 0.2862, 2.3163, 4.0868, 1.8520, 6.7631, 1.9568});

// Trending series for the unit-root reference values.
const Eigen::VectorXd kTrending = vec(
    {-0.8537, -0.4851, -1.3938, 1.4352,  0.1023,  2.1054,  1.7793,  1.3595,  2.3614,  2.2579,  3.6522,  3.5663,
     4.2333,  2.8092,  3.8543,  5.7711,  2.7281,  2.4930,  3.7345,  5.1865,  3.7475,  4.8772,  4.4417,  3.7154,
     6.7579,  6.2113,  6.5032,  6.3307,  8.0977,  6.8868,  7.5436,  6.8959,  6.5608,  9.5424,  7.5708,  9.1556,
     9.2265,  9.1638,  9.1015,  10.4802, 8.8494,  8.7341,  9.3892,  9.7792,  10.0065, 9.1355,  8.8677,  7.9266,
     10.9476, 11.3300, 9.7544,  11.3616, 12.6220, 12.9388, 13.1921, 12.0351, 13.8181, 11.9059, 14.0427, 13.9493});

}  // namespace

TEST_CASE("Ljung-Box hand value and reference") {
  const TestResult alt = ljung_box(vec({1, -1, 1, -1}), 1, 0);
  CHECK(alt.statistic == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(alt.p_value.value == doctest::Approx(0.033894853524689295).epsilon(1e-10));
  CHECK(alt.rejected_at_05);

  // statsmodels acorr_ljungbox(x, lags=[5])
  const TestResult lb = ljung_box(kSkewed, 5);
  CHECK(lb.statistic == doctest::Approx(1.07591673098885).epsilon(1e-10));
  CHECK(lb.p_value.value == doctest::Approx(0.9562131312362732).epsilon(1e-8));

  CHECK_THROWS_AS(ljung_box(kSkewed, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(ljung_box(kSkewed, 0), std::invalid_argument);
  CHECK_THROWS(ljung_box(Eigen::VectorXd::Ones(20), 3));
}

TEST_CASE("Ljung-Box is nonnegative and nondecreasing in m") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd r = gaussian(120, seed);
    double previous = 0.0;
    for (int m = 1; m <= 30; ++m) {
      const double q = ljung_box(r, m).statistic;
      CHECK(q >= previous);
      previous = q;
    }
  }
  CHECK_FALSE(ljung_box(gaussian(500, 77), 10).rejected_at_05);
}

TEST_CASE("ADF statistic matches statsmodels adfuller with fixed lag") {
  CHECK(adf_test(kTrending, {Deterministic::constant}, 3).statistic ==
        doctest::Approx(-0.6724863895060499).epsilon(1e-9));
  CHECK(adf_test(kTrending, {Deterministic::constant_and_trend}, 3).statistic ==
        doctest::Approx(-2.8545576426995454).epsilon(1e-9));
  CHECK(adf_test(kTrending, {Deterministic::none}, 3).statistic ==
        doctest::Approx(2.5719498309063633).epsilon(1e-9));
  CHECK_THROWS_AS(adf_test(kTrending.head(12), {}, 3), DataError);
}

TEST_CASE("KPSS statistic matches statsmodels kpss with fixed bandwidth") {
  const TestResult level = kpss_test(kTrending, {Deterministic::constant}, 3);
  CHECK(level.statistic == doctest::Approx(1.5643642326332112).epsilon(1e-9));
  CHECK(level.p_value.kind == PValueBound::Kind::at_most);
  CHECK(level.p_value.value == 0.01);
  const TestResult trend = kpss_test(kTrending, {Deterministic::constant_and_trend}, 3);
  CHECK(trend.statistic == doctest::Approx(0.0848841573256081).epsilon(1e-9));
  CHECK(trend.p_value.kind == PValueBound::Kind::at_least);
  CHECK(trend.p_value.value == 0.10);
  CHECK_FALSE(trend.rejected_at_05);
  CHECK_THROWS_AS(kpss_test(kTrending, {Deterministic::none}), std::invalid_argument);
  CHECK_THROWS_AS(kpss_test(Eigen::VectorXd::Constant(30, 2.0)), DataError);
}

TEST_CASE("Phillips-Perron statistic matches the arch package") {
  CHECK(pp_test(kTrending, {Deterministic::constant}, 3).statistic ==
        doctest::Approx(-0.9608607532455615).epsilon(1e-6));
  CHECK(pp_test(kTrending, {Deterministic::constant_and_trend}, 3).statistic ==
        doctest::Approx(-6.628371927068681).epsilon(1e-6));
  CHECK(pp_test(kTrending, {Deterministic::none}, 3).statistic ==
        doctest::Approx(1.7422418656391985).epsilon(1e-6));
}

TEST_CASE("Dickey-Fuller table interpolation and bounds") {
  // Statistics beyond the table edges report a bound rather than a p-value.
  const TestResult noise = adf_test(gaussian(500, 3));
  CHECK(noise.p_value.kind == PValueBound::Kind::at_most);
  CHECK(noise.p_value.value == 0.01);
  CHECK(noise.rejected_at_05);

  const TestResult walk = adf_test(random_walk(500, 5));
  CHECK(walk.p_value.value >= 0.05);
  CHECK_FALSE(walk.rejected_at_05);
}

TEST_CASE("unit-root tests on random walk versus noise") {
  const Eigen::VectorXd noise = gaussian(500, 21);
  const Eigen::VectorXd walk = random_walk(500, 22);
  CHECK(pp_test(noise).rejected_at_05);
  CHECK_FALSE(pp_test(walk).rejected_at_05);
  const TestResult kn = kpss_test(noise);
  CHECK(kn.p_value.kind == PValueBound::Kind::at_least);
  CHECK_FALSE(kn.rejected_at_05);
  const TestResult kw = kpss_test(walk);
  CHECK(kw.p_value.kind == PValueBound::Kind::at_most);
  CHECK(kw.rejected_at_05);
}

TEST_CASE("ADF and KPSS point in opposite directions on iid noise") {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const Eigen::VectorXd noise = gaussian(300, seed);
    CHECK(adf_test(noise).rejected_at_05);
    CHECK_FALSE(kpss_test(noise).rejected_at_05);
  }
}

TEST_CASE("normality statistics match reference implementations") {
  // scipy.stats.shapiro
  const TestResult sw = shapiro_wilk(kSkewed);
  CHECK(sw.statistic == doctest::Approx(0.8746039895514393).epsilon(1e-6));
  CHECK(sw.p_value.value == doctest::Approx(0.0003777254156065869).epsilon(1e-3));
  // statsmodels normal_ad (statistic unmodified, p from the modified one)
  const TestResult ad = anderson_darling(kSkewed);
  CHECK(ad.statistic == doctest::Approx(1.2458756686368986).epsilon(1e-10));
  CHECK(ad.p_value.value == doctest::Approx(0.002652313481413742).epsilon(1e-8));
  // statsmodels lilliefors(pvalmethod="approx")
  const TestResult ks = lilliefors(kSkewed);
  CHECK(ks.statistic == doctest::Approx(0.1977399455412786).epsilon(1e-10));
  CHECK(ks.p_value.value == doctest::Approx(0.00041734826693999594).epsilon(1e-8));
  // direct evaluation with scipy.stats.norm
  CHECK(cramer_von_mises(kSkewed).statistic == doctest::Approx(0.19899694254079903).epsilon(1e-10));
  CHECK(shapiro_francia(kSkewed).statistic == doctest::Approx(0.8680433636695836).epsilon(1e-10));
  const TestResult pc = pearson_chi_squared(kSkewed);
  CHECK(pc.statistic == doctest::Approx(12.65).epsilon(1e-12));
  CHECK(pc.p_value.value == doctest::Approx(0.04894318988861989).epsilon(1e-9));
}

TEST_CASE("normality battery on normal and exponential samples") {
  const auto normal = normality_battery(gaussian(200, 2024));
  REQUIRE(normal.size() == 6);
  for (const auto& r : normal) {
    INFO(r.test_name);
    CHECK_FALSE(r.rejected_at_05);
    CHECK(r.null_hypothesis == "residuals are normally distributed");
  }
  for (const auto& r : normality_battery(exponential(200, 2025))) {
    INFO(r.test_name);
    CHECK(r.rejected_at_05);
  }
  CHECK(normal[0].test_name == "Anderson-Darling");
  CHECK(normal[5].test_name == "Shapiro-Francia");
  CHECK_THROWS_AS(normality_battery(gaussian(7, 1)), DataError);
  CHECK_THROWS_AS(normality_battery(Eigen::VectorXd::Ones(20)), DataError);
}

TEST_CASE("decision matches the p-value bound") {
  std::vector<TestResult> all;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::VectorXd x = seed % 2 ? gaussian(150, seed) : random_walk(150, seed);
    all.push_back(adf_test(x));
    all.push_back(kpss_test(x));
    all.push_back(pp_test(x));
    all.push_back(ljung_box(x, 10));
    for (auto& r : normality_battery(x)) all.push_back(r);
  }
  for (const auto& r : all) {
    CHECK(r.rejected_at_05 == (r.p_value.value < 0.05));
    CHECK(r.p_value.value >= 0.0);
    CHECK(r.p_value.value <= 1.0);
  }
}
