#pragma once

#include <memory>
#include <utility>

#include "npag/benchmarks/datasets.hpp"
#include "npag/benchmarks/losses.hpp"
#include "npag/problem/composition.hpp"

namespace npag {

/// Level f_j(x) = loss(<a_j, x>, b_j) over the rows of a sparse dataset. Jacobians are
/// added row by row without forming dense feature vectors.
class SparseLinearLossLevel final : public LevelOracle {
 public:
  using Loss = double (*)(double, double);

  SparseLinearLossLevel(std::shared_ptr<const SparseDataset> data, Loss loss, Loss dloss)
      : data_(std::move(data)), loss_(loss), dloss_(dloss) {
    require(data_ && data_->size() >= 1, "SparseLinearLossLevel: empty dataset");
    require(static_cast<Index>(data_->features.rows()) == data_->size(),
            "SparseLinearLossLevel: feature rows and labels differ");
  }

  Index input_dim() const override { return data_->dimension(); }
  Index output_dim() const override { return 1; }
  Index component_count() const override { return data_->size(); }

  double margin(Index j, const Vector& x) const {
    double t = 0.0;
    for (SparseRows::InnerIterator it(data_->features, static_cast<Eigen::Index>(j)); it; ++it) {
      t += it.value() * x[it.col()];
    }
    return t;
  }

  Vector value(Index j, const Vector& x) const override {
    Vector out(1);
    out[0] = loss_(margin(j, x), data_->labels[j]);
    return out;
  }

  Matrix jacobian(Index j, const Vector& x) const override {
    Matrix out = Matrix::Zero(1, static_cast<Eigen::Index>(input_dim()));
    add_jacobian(j, x, 1.0, out);
    return out;
  }

  void add_value(Index j, const Vector& x, double weight, Matrix& out) const override {
    out(0, 0) += weight * loss_(margin(j, x), data_->labels[j]);
  }

  void add_jacobian(Index j, const Vector& x, double weight, Matrix& out) const override {
    const double g = weight * dloss_(margin(j, x), data_->labels[j]);
    for (SparseRows::InnerIterator it(data_->features, static_cast<Eigen::Index>(j)); it; ++it) {
      out(0, it.col()) += g * it.value();
    }
  }

  const SparseDataset& data() const { return *data_; }

 private:
  std::shared_ptr<const SparseDataset> data_;
  Loss loss_;
  Loss dloss_;
};

// Largest Euclidean row norm of the feature matrix.
inline double max_row_norm(const SparseDataset& ds) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < ds.features.outerSize(); ++i) {
    double s = 0.0;
    for (SparseRows::InnerIterator it(ds.features, i); it; ++it) s += it.value() * it.value();
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

namespace detail {
// Data-derived constants for loss(<a, x>, b) with |loss'| <= g1 and |loss''| <= g2:
// ell = g1 max|a|, L = g2 max|a|^2, and the gradient variance is at most ell^2.
inline Smoothness linear_loss_smoothness(const SparseDataset& ds, double g1, double g2) {
  const double a = std::max(max_row_norm(ds), 1e-12);
  Smoothness s;
  s.ell = g1 * a;
  s.L = g2 * a * a;
  s.sigma = g1 * a;
  s.delta = 0.0;
  return s;
}
}  // namespace detail

/// Sparse binary classification with the logistic difference loss and beta |x|_1.
inline CompositionProblem logistic_difference_problem(std::shared_ptr<const SparseDataset> data,
                                                      double beta) {
  const Smoothness s = detail::linear_loss_smoothness(*data, logistic_difference_lipschitz(),
                                                      kLogisticDifferenceSmoothness);
  auto level = std::make_shared<SparseLinearLossLevel>(std::move(data), &logistic_difference_loss,
                                                       &logistic_difference_dloss);
  return CompositionProblem({LevelSpec{level, s}}, l1_regularizer(beta));
}

/// Sparse binary classification with the two-layer network loss and beta |x|_1.
inline CompositionProblem two_layer_nn_problem(std::shared_ptr<const SparseDataset> data, double beta) {
  const Smoothness s =
      detail::linear_loss_smoothness(*data, kTwoLayerLipschitz, kTwoLayerSmoothness);
  auto level = std::make_shared<SparseLinearLossLevel>(std::move(data), &two_layer_loss, &two_layer_dloss);
  return CompositionProblem({LevelSpec{level, s}}, l1_regularizer(beta));
}

}  // namespace npag
