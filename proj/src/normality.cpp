#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "admitcast/distributions.hpp"
#include "admitcast/errors.hpp"
#include "admitcast/stat_tests.hpp"

namespace admitcast {

namespace {

constexpr const char* kNormalNull = "residuals are normally distributed";

struct Standardized {
  std::vector<double> sorted;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator
};

Standardized prepare(const Eigen::VectorXd& x, Eigen::Index min_n, const char* who) {
  if (x.size() < min_n)
    throw DataError(std::string(who) + ": needs at least " + std::to_string(min_n) + " observations");
  Standardized s;
  s.sorted.assign(x.data(), x.data() + x.size());
  std::sort(s.sorted.begin(), s.sorted.end());
  if (s.sorted.front() == s.sorted.back()) throw DataError(std::string(who) + ": zero-variance sample");
  const double n = static_cast<double>(x.size());
  s.mean = x.mean();
  s.sd = std::sqrt((x.array() - s.mean).square().sum() / (n - 1.0));
  return s;
}

double poly(const double* c, int order, double x) {
  double r = c[order - 1];
  for (int i = order - 2; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

// Royston (1995), algorithm AS R94.
TestResult shapiro_wilk(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 3, "shapiro_wilk");
  const int n = static_cast<int>(s.sorted.size());
  if (n > 5000) throw DataError("shapiro_wilk: sample larger than 5000");

  static constexpr double g[2] = {-2.273, 0.459};
  static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static constexpr double c3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[3] = {-0.4803, -0.082676, 0.0030302};

  const int half = n / 2;
  const double an = n;
  std::vector<double> a(static_cast<std::size_t>(half) + 1, 0.0);
  if (n == 3) {
    a[1] = std::sqrt(0.5);
  } else {
    std::vector<double> m(static_cast<std::size_t>(half) + 1);
    double summ2 = 0.0;
    for (int i = 1; i <= half; ++i) {
      m[i] = dist::normal_quantile((i - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, 6, rsn) - m[1] / ssumm2;
    int first = 2;
    double fac;
    if (n > 5) {
      first = 3;
      const double a2 = -m[2] / ssumm2 + poly(c2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[1] * m[1] - 2.0 * m[2] * m[2]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[2] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1));
    }
    a[1] = a1;
    for (int i = first; i <= half; ++i) a[i] = -m[i] / fac;
  }

  double num = 0.0;
  for (int i = 1; i <= half; ++i) num += a[i] * (s.sorted[n - i] - s.sorted[i - 1]);
  double ssq = 0.0;
  for (double v : s.sorted) ssq += (v - s.mean) * (v - s.mean);
  const double w = std::min(1.0, num * num / ssq);

  double p;
  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;  // 6 / pi
    constexpr double stqr = 1.04719755119660;  // pi / 3
    p = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
  } else {
    double y = std::log(1.0 - w);
    const double xx = std::log(an);
    double mean, sd;
    if (n <= 11) {
      const double gamma = poly(g, 2, an);
      if (y >= gamma) return make_test_result("Shapiro-Wilk", w, PValueBound::exact(1e-99), kNormalNull);
      y = -std::log(gamma - y);
      mean = poly(c3, 4, an);
      sd = std::exp(poly(c4, 4, an));
    } else {
      mean = poly(c5, 4, xx);
      sd = std::exp(poly(c6, 3, xx));
    }
    p = dist::normal_sf((y - mean) / sd);
  }
  return make_test_result("Shapiro-Wilk", w, PValueBound::exact(p), kNormalNull);
}

// Royston (1993) log-normal approximation for W'.
TestResult shapiro_francia(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 5, "shapiro_francia");
  const auto n = static_cast<Eigen::Index>(s.sorted.size());
  if (n > 5000) throw DataError("shapiro_francia: sample larger than 5000");
  Eigen::VectorXd m(n);
  const Eigen::VectorXd xs = Eigen::Map<const Eigen::VectorXd>(s.sorted.data(), n);
  for (Eigen::Index i = 0; i < n; ++i) m[i] = dist::normal_quantile((i + 1 - 0.375) / (n + 0.25));
  const Eigen::VectorXd mc = m.array() - m.mean();
  const Eigen::VectorXd xc = xs.array() - xs.mean();
  const double r = mc.dot(xc) / std::sqrt(mc.squaredNorm() * xc.squaredNorm());
  const double w = r * r;
  const double u = std::log(static_cast<double>(n));
  const double v = std::log(u);
  const double mu = -1.2725 + 1.0521 * (v - u);
  const double sig = 1.0308 - 0.26758 * (v + 2.0 / u);
  const double z = (std::log(1.0 - w) - mu) / sig;
  return make_test_result("Shapiro-Francia", w, PValueBound::exact(dist::normal_sf(z)), kNormalNull);
}

// A^2 with the case-3 small-sample modification (1 + 0.75/n + 2.25/n^2);
// Stephens' piecewise p-value approximation.
TestResult anderson_darling(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 8, "anderson_darling");
  const auto n = s.sorted.size();
  const double nn = static_cast<double>(n);
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (s.sorted[i] - s.mean) / s.sd;
    const double zr = (s.sorted[n - 1 - i] - s.mean) / s.sd;
    h += (2.0 * static_cast<double>(i) + 1.0) *
         (std::log(dist::normal_cdf(zi)) + std::log(dist::normal_sf(zr)));
  }
  const double a2 = -nn - h / nn;
  const double aa = (1.0 + 0.75 / nn + 2.25 / (nn * nn)) * a2;
  double p;
  if (aa < 0.2) {
    p = 1.0 - std::exp(-13.436 + 101.14 * aa - 223.73 * aa * aa);
  } else if (aa < 0.34) {
    p = 1.0 - std::exp(-8.318 + 42.796 * aa - 59.938 * aa * aa);
  } else if (aa < 0.6) {
    p = std::exp(0.9177 - 4.279 * aa - 1.38 * aa * aa);
  } else if (aa < 10.0) {
    p = std::exp(1.2937 - 5.709 * aa + 0.0186 * aa * aa);
  } else {
    p = 3.7e-24;
  }
  return make_test_result("Anderson-Darling", a2, PValueBound::exact(p), kNormalNull);
}

TestResult cramer_von_mises(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 8, "cramer_von_mises");
  const auto n = s.sorted.size();
  const double nn = static_cast<double>(n);
  double w = 1.0 / (12.0 * nn);
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = dist::normal_cdf((s.sorted[i] - s.mean) / s.sd) - (2.0 * i + 1.0) / (2.0 * nn);
    w += diff * diff;
  }
  const double ww = (1.0 + 0.5 / nn) * w;
  double p;
  if (ww < 0.0275) {
    p = 1.0 - std::exp(-13.953 + 775.5 * ww - 12542.61 * ww * ww);
  } else if (ww < 0.051) {
    p = 1.0 - std::exp(-5.903 + 179.546 * ww - 1515.29 * ww * ww);
  } else if (ww < 0.092) {
    p = std::exp(0.886 - 31.62 * ww + 10.897 * ww * ww);
  } else if (ww < 1.1) {
    p = std::exp(1.111 - 34.242 * ww + 12.832 * ww * ww);
  } else {
    p = 7.37e-10;
  }
  return make_test_result("Cramer-von Mises", w, PValueBound::exact(p), kNormalNull);
}

// Kolmogorov-Smirnov D with estimated parameters; Dallal-Wilkinson (1986)
// p-value approximation, Stephens' modified statistic above p = 0.1.
TestResult lilliefors(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 5, "lilliefors");
  const auto n = s.sorted.size();
  const double nn = static_cast<double>(n);
  double dplus = 0.0, dminus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = dist::normal_cdf((s.sorted[i] - s.mean) / s.sd);
    dplus = std::max(dplus, (i + 1.0) / nn - p);
    dminus = std::max(dminus, p - static_cast<double>(i) / nn);
  }
  const double d = std::max(dplus, dminus);
  double kd = d, nd = nn;
  if (n > 100) {
    kd = d * std::pow(nn / 100.0, 0.49);
    nd = 100.0;
  }
  double p = std::exp(-7.01256 * kd * kd * (nd + 2.78019) + 2.99587 * kd * std::sqrt(nd + 2.78019) -
                      0.122119 + 0.974598 / std::sqrt(nd) + 1.67997 / nd);
  if (p > 0.1) {
    const double kk = (std::sqrt(nn) - 0.01 + 0.85 / std::sqrt(nn)) * d;
    if (kk <= 0.302) {
      p = 1.0;
    } else if (kk <= 0.5) {
      p = 2.76773 - 19.828315 * kk + 80.709644 * kk * kk - 138.55152 * std::pow(kk, 3) +
          81.218052 * std::pow(kk, 4);
    } else if (kk <= 0.9) {
      p = -4.901232 + 40.662806 * kk - 97.490286 * kk * kk + 94.029866 * std::pow(kk, 3) -
          32.355711 * std::pow(kk, 4);
    } else if (kk <= 1.31) {
      p = 6.198765 - 19.558097 * kk + 18.732015 * kk * kk - 5.802517 * std::pow(kk, 3) +
          0.6135096 * std::pow(kk, 4);
    } else {
      p = 0.0;
    }
  }
  return make_test_result("Kolmogorov-Smirnov (Lilliefors)", d, PValueBound::exact(p), kNormalNull);
}

// ceil(2 n^(2/5)) equiprobable classes under the fitted normal; two degrees
// of freedom are removed for the estimated mean and variance.
TestResult pearson_chi_squared(const Eigen::VectorXd& x) {
  const Standardized s = prepare(x, 8, "pearson_chi_squared");
  const auto n = s.sorted.size();
  const double nn = static_cast<double>(n);
  const int classes = static_cast<int>(std::ceil(2.0 * std::pow(nn, 0.4)));
  std::vector<double> count(static_cast<std::size_t>(classes), 0.0);
  for (double v : s.sorted) {
    auto bin = static_cast<int>(std::floor(classes * dist::normal_cdf((v - s.mean) / s.sd)));
    bin = std::clamp(bin, 0, classes - 1);
    count[static_cast<std::size_t>(bin)] += 1.0;
  }
  const double expected = nn / classes;
  double stat = 0.0;
  for (double c : count) stat += (c - expected) * (c - expected) / expected;
  const int df = classes - 3;
  if (df < 1) throw DataError("pearson_chi_squared: too few classes for the sample size");
  return make_test_result("Pearson chi-squared", stat, PValueBound::exact(dist::chi_squared_sf(stat, df)),
                          kNormalNull);
}

std::vector<TestResult> normality_battery(const Eigen::VectorXd& residuals) {
  if (residuals.size() < 8) throw DataError("normality battery needs at least 8 residuals");
  return {anderson_darling(residuals), shapiro_wilk(residuals), cramer_von_mises(residuals),
          lilliefors(residuals),       pearson_chi_squared(residuals), shapiro_francia(residuals)};
}

}  // namespace admitcast
