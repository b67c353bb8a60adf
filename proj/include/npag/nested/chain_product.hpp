#pragma once

#include <span>

#include "npag/core/types.hpp"

namespace npag {

/// v = z_1^T z_2^T ... z_{m-1}^T z_m^T, where z_i is d_i x d_{i-1} and z_m is 1 x d_{m-1}.
/// Accumulated right to left so only matrix-vector products are formed.
inline Vector chain_product(std::span<const Matrix> jacobians) {
  if (jacobians.empty()) throw InvalidArgument("chain_product: no factors");
  const Matrix& top = jacobians.back();
  require_dims(top.rows() == 1, "chain_product: last factor must have one row");
  Vector w = top.transpose();
  for (std::size_t k = jacobians.size() - 1; k-- > 0;) {
    const Matrix& z = jacobians[k];
    require_dims(z.rows() == w.size(), "chain_product: adjacent factors do not chain");
    w = z.transpose() * w;
  }
  return w;
}

}  // namespace npag
