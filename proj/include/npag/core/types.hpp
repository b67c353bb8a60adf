#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace npag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = std::size_t;

// Error hierarchy. Every failure the library reports derives from npag::Error so
// callers (the CLI in particular) can map categories to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Raised when an exact average is requested from a level that can only be sampled.
class UnavailableOracle : public Error {
 public:
  using Error::Error;
};

// Misuse of a stateful estimator (step before restart, SAGA on a stream family, ...).
class EstimatorError : public Error {
 public:
  using Error::Error;
};

// A run produced NaN/Inf. Carries the iteration at which it was detected.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, Index iteration)
      : Error(what), iteration_(iteration) {}
  Index iteration() const { return iteration_; }

 private:
  Index iteration_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, Index line = 0) : Error(what), line_(line) {}
  // 1-based line number, 0 when not tied to a line.
  Index line() const { return line_; }

 private:
  Index line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

inline void require_dims(bool cond, const std::string& msg) {
  if (!cond) throw DimensionMismatch(msg);
}

// Integer ceiling of a formula value. Values within a relative 1e-9 of an integer
// snap to it so that e.g. 64^(2/3) evaluates to 16 rather than 17.
inline Index ceil_count(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("ceil_count: non-finite value");
  if (value <= 1.0) return 1;
  const double nearest = std::round(value);
  if (std::abs(value - nearest) <= 1e-9 * std::max(1.0, std::abs(value))) {
    return static_cast<Index>(nearest);
  }
  return static_cast<Index>(std::ceil(value));
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace npag
