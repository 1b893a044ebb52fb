#include "admitcast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace admitcast {

namespace {

struct Attempt {
  Eigen::VectorXd x;
  double value;
  int evaluations;
  bool converged;
};

Attempt run_simplex(const Objective& raw, const Eigen::VectorXd& start, const Eigen::VectorXd& step,
                    const NelderMeadOptions& opt) {
  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  const auto dim = start.size();
  int evals = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = raw(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(dim) + 1, start);
  std::vector<double> vals(pts.size());
  for (Eigen::Index i = 0; i < dim; ++i) pts[static_cast<std::size_t>(i) + 1][i] += step[i];
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(pts.size());
  bool converged = false;
  while (evals < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (std::isfinite(vals[worst]) &&
        vals[worst] - vals[best] < opt.tolerance * (1.0 + std::abs(vals[best]))) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += pts[order[i]];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + rho * (reflected - centroid))
                : Eigen::VectorXd(centroid + rho * (pts[worst] - centroid));
    const double fc = f(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
      auto& p = pts[order[i]];
      p = pts[best] + sigma * (p - pts[best]);
      vals[order[i]] = f(p);
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(it - vals.begin());
  return {pts[idx], vals[idx], evals, converged};
}

}  // namespace

OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& start, const NelderMeadOptions& options) {
  OptimResult result;
  const auto dim = start.size();
  if (dim == 0) {
    result.x = start;
    result.value = f(start);
    result.evaluations = 1;
    result.converged = std::isfinite(result.value);
    return result;
  }
  Eigen::VectorXd step = options.step.size() == dim ? options.step : Eigen::VectorXd::Constant(dim, 0.1);

  Attempt best = run_simplex(f, start, step, options);
  result.evaluations = best.evaluations;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(0.5, 1.5);
  for (int r = 0; r < options.max_restarts; ++r) {
    Eigen::VectorXd jittered(dim);
    for (Eigen::Index i = 0; i < dim; ++i) jittered[i] = step[i] * jitter(rng);
    Attempt next = run_simplex(f, best.x, jittered, options);
    result.evaluations += next.evaluations;
    ++result.restarts;
    const double gain = best.value - next.value;
    const bool improved = next.value < best.value;
    if (improved) best = next;
    else best.converged = best.converged || next.converged;
    if (gain < options.tolerance * (1.0 + std::abs(best.value)) && best.converged) break;
  }
  result.x = best.x;
  result.value = best.value;
  result.converged = best.converged && std::isfinite(best.value);
  return result;
}

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace admitcast
