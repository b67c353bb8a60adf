#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "npag/benchmarks/datasets.hpp"
#include "npag/problem/composition.hpp"

namespace npag {

// Inner level f_{1,j}(x) = [<r_j, x>, <r_j, x>^2].
class PortfolioInnerLevel final : public LevelOracle {
 public:
  explicit PortfolioInnerLevel(std::shared_ptr<const PayoffMatrix> data) : data_(std::move(data)) {
    require(data_ && data_->periods() >= 1 && data_->assets() >= 1, "PortfolioInnerLevel: empty payoffs");
  }

  Index input_dim() const override { return data_->assets(); }
  Index output_dim() const override { return 2; }
  Index component_count() const override { return data_->periods(); }

  Vector value(Index j, const Vector& x) const override {
    const double t = data_->payoffs.row(static_cast<Eigen::Index>(j)).dot(x);
    Vector out(2);
    out << t, t * t;
    return out;
  }

  Matrix jacobian(Index j, const Vector& x) const override {
    const auto r = data_->payoffs.row(static_cast<Eigen::Index>(j));
    const double t = r.dot(x);
    Matrix out(2, static_cast<Eigen::Index>(input_dim()));
    out.row(0) = r;
    out.row(1) = 2.0 * t * r;
    return out;
  }

  void add_value(Index j, const Vector& x, double weight, Matrix& out) const override {
    const double t = data_->payoffs.row(static_cast<Eigen::Index>(j)).dot(x);
    out(0, 0) += weight * t;
    out(1, 0) += weight * t * t;
  }

  void add_jacobian(Index j, const Vector& x, double weight, Matrix& out) const override {
    const auto r = data_->payoffs.row(static_cast<Eigen::Index>(j));
    const double t = r.dot(x);
    out.row(0) += weight * r;
    out.row(1) += (weight * 2.0 * t) * r;
  }

 private:
  std::shared_ptr<const PayoffMatrix> data_;
};

// Outer level f_2(y, z) = -y - lambda y^2 + lambda z; one deterministic component.
class PortfolioOuterLevel final : public LevelOracle {
 public:
  explicit PortfolioOuterLevel(double lambda) : lambda_(lambda) {
    require(lambda >= 0.0, "PortfolioOuterLevel: lambda must be non-negative");
  }

  Index input_dim() const override { return 2; }
  Index output_dim() const override { return 1; }
  Index component_count() const override { return 1; }

  Vector value(Index, const Vector& y) const override {
    Vector out(1);
    out[0] = -y[0] - lambda_ * y[0] * y[0] + lambda_ * y[1];
    return out;
  }

  Matrix jacobian(Index, const Vector& y) const override {
    Matrix out(1, 2);
    out << -1.0 - 2.0 * lambda_ * y[0], lambda_;
    return out;
  }

 private:
  double lambda_;
};

struct PortfolioOptions {
  double lambda = 0.2;
  double beta = 0.01;
  // Radius R of the region |x| <= R on which the recorded constants hold.
  double radius = 1.0;
};

/// Constants of both levels on |x| <= R with rho = max_j |r_j|:
///   level 1: ell = rho sqrt(1 + 4 rho^2 R^2), L = 2 rho^2, sigma = ell,
///            delta = rho R sqrt(1 + rho^2 R^2);
///   level 2: ell = sqrt((1 + 2 lambda rho R)^2 + lambda^2), L = 2 lambda (floored), sigma = 0.
inline std::pair<Smoothness, Smoothness> portfolio_smoothness(const PayoffMatrix& pm, double lambda,
                                                              double radius) {
  require(radius > 0.0, "portfolio: radius must be positive");
  const double rho = std::max(pm.payoffs.rowwise().norm().maxCoeff(), 1e-12);
  const double rr = rho * radius;
  Smoothness inner;
  inner.ell = rho * std::sqrt(1.0 + 4.0 * rr * rr);
  inner.L = 2.0 * rho * rho;
  inner.sigma = inner.ell;
  inner.delta = rr * std::sqrt(1.0 + rr * rr);
  Smoothness outer;
  const double a = 1.0 + 2.0 * lambda * rr;
  outer.ell = std::sqrt(a * a + lambda * lambda);
  outer.L = std::max(2.0 * lambda, 1e-12);
  outer.sigma = 0.0;
  outer.delta = 0.0;
  return {inner, outer};
}

/// Risk-averse portfolio selection
///   min_x  -E<r, x> + lambda Var<r, x> + beta |x|_1
/// written as f_2(f_1(x)) with f_1 averaging [<r_j, x>, <r_j, x>^2] over periods.
inline CompositionProblem portfolio_problem(std::shared_ptr<const PayoffMatrix> data,
                                            const PortfolioOptions& opt = {}) {
  require(data != nullptr, "portfolio_problem: no payoffs");
  require(data->payoffs.allFinite(), "portfolio_problem: payoffs must be finite");
  const auto [inner, outer] = portfolio_smoothness(*data, opt.lambda, opt.radius);
  std::vector<LevelSpec> levels;
  levels.push_back({std::make_shared<PortfolioInnerLevel>(std::move(data)), inner});
  levels.push_back({std::make_shared<PortfolioOuterLevel>(opt.lambda), outer});
  return CompositionProblem(std::move(levels), l1_regularizer(opt.beta));
}

}  // namespace npag
