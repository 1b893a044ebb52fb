#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace admitcast {

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  int max_evaluations = 5000;  // per attempt
  double tolerance = 1e-8;     // stop when f_max - f_min < tolerance * (1 + |f_min|)
  int max_restarts = 3;
  std::uint64_t seed = 20120301;
  // Initial simplex edge per coordinate; a scalar 0.1 when empty.
  Eigen::VectorXd step;
};

struct OptimResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
};

// Minimizes `f`. Non-finite objective values are treated as +inf, so the
// objective may reject infeasible points by returning NaN or inf. Restarts
// rebuild a jittered simplex around the incumbent and stop as soon as a
// restart fails to improve it.
OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& start,
                        const NelderMeadOptions& options = {});

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search on [lo, hi] for a unimodal function.
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double hi,
                             double tolerance = 1e-8);

}  // namespace admitcast
