#pragma once

#include <stdexcept>
#include <string>

namespace admitcast {

// Input data that cannot support the requested computation (too short,
// zero variance, malformed file contents).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An estimator gave up before reaching a usable optimum.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace admitcast
