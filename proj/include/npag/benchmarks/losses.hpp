#pragma once

#include <algorithm>
#include <cmath>

namespace npag {

/// log(1 + e^z) without overflow: max(z, 0) + log1p(e^{-|z|}).
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

/// 1 / (1 + e^{-z}) evaluated on the side that cannot overflow.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Logistic difference loss log(1 + e^{-bt}) - log(1 + e^{-bt-1}) and its t-derivative.
inline double logistic_difference_loss(double t, double b) {
  return softplus(-b * t) - softplus(-b * t - 1.0);
}

inline double logistic_difference_dloss(double t, double b) {
  return -b * (sigmoid(-b * t) - sigmoid(-b * t - 1.0));
}

// sup_t |d/dt| = sigmoid(1/2) - sigmoid(-1/2); |d2/dt2| <= 1/4 since sigmoid' lies in (0, 1/4].
inline double logistic_difference_lipschitz() { return sigmoid(0.5) - sigmoid(-0.5); }
inline constexpr double kLogisticDifferenceSmoothness = 0.25;

// Two-layer network loss (1 - 1/(1 + e^{-bt}))^2 = sigmoid(-bt)^2 and its t-derivative.
inline double two_layer_loss(double t, double b) {
  const double s = sigmoid(-b * t);
  return s * s;
}

inline double two_layer_dloss(double t, double b) {
  const double s = sigmoid(-b * t);
  return -2.0 * b * s * s * (1.0 - s);
}

// With s = sigmoid(-bt): |d/dt| = 2 s^2 (1 - s) <= 8/27 and
// |d2/dt2| = |4 s^2 - 10 s^3 + 6 s^4| <= 0.1541 (attained at s = (15 - sqrt(33)) / 24).
inline constexpr double kTwoLayerLipschitz = 8.0 / 27.0;
inline constexpr double kTwoLayerSmoothness = 0.1542;

}  // namespace npag
