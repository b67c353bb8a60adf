#pragma once

#include <memory>

#include "npag/core/types.hpp"
#include "npag/prox/soft_threshold.hpp"

namespace npag {

// Convex, lower semi-continuous Psi with a closed-form proximal operator.
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  // Psi(x); may be +infinity outside the domain.
  virtual double value(const Vector& x) const = 0;
  // argmin_y Psi(y) + ||y - x||^2 / (2 eta).
  virtual Vector prox(const Vector& x, double eta) const = 0;
};

class ZeroRegularizer final : public Regularizer {
 public:
  double value(const Vector&) const override { return 0.0; }
  Vector prox(const Vector& x, double eta) const override {
    if (!(eta > 0.0)) throw InvalidArgument("prox: step eta must be positive");
    return x;
  }
};

class L1Regularizer final : public Regularizer {
 public:
  explicit L1Regularizer(double beta) : beta_(beta) {
    if (!(beta >= 0.0)) throw InvalidArgument("L1Regularizer: beta must be non-negative");
  }
  double beta() const { return beta_; }
  double value(const Vector& x) const override { return beta_ * x.lpNorm<1>(); }
  Vector prox(const Vector& x, double eta) const override { return prox_l1(x, eta, beta_); }

 private:
  double beta_;
};

inline std::shared_ptr<const Regularizer> zero_regularizer() {
  return std::make_shared<ZeroRegularizer>();
}

inline std::shared_ptr<const Regularizer> l1_regularizer(double beta) {
  return std::make_shared<L1Regularizer>(beta);
}

}  // namespace npag
