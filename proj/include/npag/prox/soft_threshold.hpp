#pragma once

#include <cmath>

#include "npag/core/types.hpp"

namespace npag {

/// Proximal operator of beta*||.||_1 with step eta: componentwise soft threshold
/// sign(x_i) * max(|x_i| - eta*beta, 0). |x_i| == eta*beta maps to exactly 0.
inline Vector prox_l1(const Vector& x, double eta, double beta) {
  if (!(eta > 0.0)) throw InvalidArgument("prox_l1: step eta must be positive");
  if (!(beta >= 0.0)) throw InvalidArgument("prox_l1: weight beta must be non-negative");
  const double thresh = eta * beta;
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    out[i] = a > thresh ? std::copysign(a - thresh, x[i]) : 0.0;
  }
  return out;
}

}  // namespace npag
