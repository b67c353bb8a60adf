#pragma once

#include <span>
#include <vector>

#include "npag/core/types.hpp"
#include "npag/problem/composition.hpp"

namespace npag {

struct LevelConstants {
  double ell = 1.0;
  double L = 1.0;
  double sigma = 0.0;
  double delta = 0.0;
};

// Composed Lipschitz and variance constants of F = f_m o ... o f_1.
struct CompositeConstants {
  double ell_F = 1.0;
  double L_F = 1.0;
  double sigma_F_sq = 0.0;
  double delta_F_sq = 0.0;
};

inline std::vector<LevelConstants> level_constants(const CompositionProblem& problem) {
  std::vector<LevelConstants> out;
  for (const LevelSpec& lv : problem.level_specs()) {
    out.push_back({lv.smoothness.ell, lv.smoothness.L, lv.smoothness.sigma, lv.smoothness.delta});
  }
  return out;
}

struct LipschitzPair {
  double ell_F;
  double L_F;
};

/// ell_F = prod_i ell_i and
/// L_F = sum_i L_i (prod_{r<i} ell_r^2)(prod_{r>i} ell_r), empty products being 1.
inline LipschitzPair compose_lipschitz(std::span<const LevelConstants> levels) {
  if (levels.empty()) throw InvalidArgument("compose_lipschitz: need at least one level");
  for (const auto& lv : levels) {
    if (!(lv.ell > 0.0) || !(lv.L > 0.0)) {
      throw InvalidArgument("compose_lipschitz: constants must be positive");
    }
  }
  const std::size_t m = levels.size();
  double ell_F = 1.0;
  for (const auto& lv : levels) ell_F *= lv.ell;
  double L_F = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double below = 1.0;
    for (std::size_t r = 0; r < i; ++r) below *= levels[r].ell * levels[r].ell;
    double above = 1.0;
    for (std::size_t r = i + 1; r < m; ++r) above *= levels[r].ell;
    L_F += levels[i].L * below * above;
  }
  return {ell_F, L_F};
}

struct VariancePair {
  double sigma_F_sq;
  double delta_F_sq;
};

/// sigma_F^2 = sum_i (prod_{r != i} ell_r^2) sigma_i^2,
/// delta_F^2 = sum_{i<m} L_F^2 / (prod_{r<=i} ell_r^2) delta_i^2. The top-level delta is ignored.
inline VariancePair compose_variances(std::span<const LevelConstants> levels, double L_F) {
  if (levels.empty()) throw InvalidArgument("compose_variances: need at least one level");
  if (!(L_F > 0.0)) throw InvalidArgument("compose_variances: L_F must be positive");
  for (const auto& lv : levels) {
    if (!(lv.ell > 0.0)) throw InvalidArgument("compose_variances: ell must be positive");
    if (!(lv.sigma >= 0.0) || !(lv.delta >= 0.0)) {
      throw InvalidArgument("compose_variances: variance bounds must be non-negative");
    }
  }
  const std::size_t m = levels.size();
  double sigma_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double others = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (r != i) others *= levels[r].ell * levels[r].ell;
    }
    sigma_sq += others * levels[i].sigma * levels[i].sigma;
  }
  double delta_sq = 0.0;
  double prefix = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    prefix *= levels[i].ell * levels[i].ell;
    delta_sq += L_F * L_F / prefix * levels[i].delta * levels[i].delta;
  }
  return {sigma_sq, delta_sq};
}

inline CompositeConstants compose_constants(std::span<const LevelConstants> levels) {
  const LipschitzPair lip = compose_lipschitz(levels);
  const VariancePair var = compose_variances(levels, lip.L_F);
  return {lip.ell_F, lip.L_F, var.sigma_F_sq, var.delta_F_sq};
}

inline CompositeConstants compose_constants(const CompositionProblem& problem) {
  const std::vector<LevelConstants> lv = level_constants(problem);
  return compose_constants(lv);
}

}  // namespace npag
