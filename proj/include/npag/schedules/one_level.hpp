#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "npag/core/types.hpp"

namespace npag {

// Epoch length and batch sizes for a one-level variance-reduced method.
struct OneLevelParams {
  Index tau = 1;
  Index big_batch = 1;
  Index small_batch = 1;
};

inline void require_sigma_eps(double sigma, double eps, const char* who) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(std::string(who) + ": expectation mode needs sigma > 0");
  }
  require(eps > 0.0 && std::isfinite(eps), std::string(who) + ": epsilon must be positive");
}

/// SPIDER, expectation case: tau = ceil(2 sigma / eps), B = ceil(2 sigma^2 / eps^2),
/// b = ceil(sigma / eps).
inline OneLevelParams spider_expectation(double sigma, double eps) {
  require_sigma_eps(sigma, eps, "spider_expectation");
  const double r = sigma / eps;
  return {ceil_count(2.0 * r), ceil_count(2.0 * r * r), ceil_count(r)};
}

/// SPIDER, finite sum of n: tau = ceil(sqrt(2n)), B = n, b = ceil(sqrt(2n) / 4).
inline OneLevelParams spider_finite_sum(Index n) {
  require(n >= 1, "spider_finite_sum: n must be >= 1");
  const double s = std::sqrt(2.0 * static_cast<double>(n));
  return {ceil_count(s), n, ceil_count(s / 4.0)};
}

/// SVRG, expectation case: tau = ceil((sqrt(2) sigma / eps)^(2/3)), b = ceil(tau^2 / 2),
/// B = ceil(2 sigma^2 / eps^2). The rounded tau feeds b.
inline OneLevelParams svrg_expectation(double sigma, double eps) {
  require_sigma_eps(sigma, eps, "svrg_expectation");
  const double r = sigma / eps;
  const Index tau = ceil_count(std::pow(std::sqrt(2.0) * r, 2.0 / 3.0));
  const double t = static_cast<double>(tau);
  return {tau, ceil_count(2.0 * r * r), ceil_count(t * t / 2.0)};
}

/// SVRG, finite sum of n: epoch ceil(n^(1/3)), batch ceil(n^(2/3)), full snapshot.
inline OneLevelParams svrg_finite_sum(Index n) {
  require(n >= 1, "svrg_finite_sum: n must be >= 1");
  const double nd = static_cast<double>(n);
  return {ceil_count(std::cbrt(nd)), n, std::min(n, ceil_count(std::pow(nd, 2.0 / 3.0)))};
}

/// SAGA batch b = ceil(n^(2/3)); tau is the length of an eps stage, ceil(n^(1/3)).
inline OneLevelParams saga_finite_sum(Index n) {
  require(n >= 1, "saga_finite_sum: n must be >= 1");
  const double nd = static_cast<double>(n);
  return {ceil_count(std::cbrt(nd)), n, std::min(n, ceil_count(std::pow(nd, 2.0 / 3.0)))};
}

/// Step cap delta = eps / (2L) that the one-level MSE bounds assume.
inline double step_cap(double eps, double L) {
  require(eps > 0.0 && L > 0.0, "step_cap: eps and L must be positive");
  return eps / (2.0 * L);
}

}  // namespace npag
