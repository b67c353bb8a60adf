#pragma once

#include "npag/core/types.hpp"
#include "npag/problem/composition.hpp"
#include "npag/problem/regularizer.hpp"
#include "npag/prox/soft_threshold.hpp"

namespace npag {

// Tentative point x~ = prox(x - eta v) and the approximate gradient mapping (x - x~)/eta.
struct ProxResult {
  Vector point;
  Vector mapping;
  double mapping_norm = 0.0;
  double eta = 0.0;
};

inline ProxResult gradient_mapping(const Regularizer& psi, const Vector& x, double eta,
                                   const Vector& v) {
  if (!(eta > 0.0)) throw InvalidArgument("gradient_mapping: eta must be positive");
  require_dims(x.size() == v.size(), "gradient_mapping: x and v differ in dimension");
  ProxResult r;
  r.eta = eta;
  r.point = psi.prox(x - eta * v, eta);
  r.mapping = (x - r.point) / eta;
  r.mapping_norm = r.mapping.norm();
  return r;
}

inline ProxResult gradient_mapping(const CompositionProblem& problem, const Vector& x, double eta,
                                   const Vector& v) {
  require_dims(static_cast<Index>(v.size()) == problem.dimension(),
               "gradient_mapping: v does not match the problem dimension");
  return gradient_mapping(problem.regularizer(), x, eta, v);
}

/// Exact proximal gradient mapping G(x) using the full gradient.
inline ProxResult exact_gradient_mapping(const CompositionProblem& problem, const Vector& x,
                                         double eta) {
  return gradient_mapping(problem, x, eta, full_gradient(problem, x));
}

}  // namespace npag
