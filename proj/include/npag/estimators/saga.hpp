#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "npag/estimators/minibatch.hpp"

namespace npag {

/// SAGA estimator over a finite family.
///
///   v^t = u^{t-1} + (1/|B|) sum_{i in B} (phi_i(x^t) - phi_i(alpha_i))
///   u^t = u^{t-1} + (1/n)   sum_{i in B} (phi_i(x^t) - phi_i(alpha_i))
///
/// The batch is drawn with replacement. Repeated indices count with multiplicity in v
/// but are written to the table once, so u stays equal to the mean of the table.
/// The table stores phi_i(alpha_i) when that is smaller than the point, else alpha_i.
class SagaEstimator {
 public:
  explicit SagaEstimator(const MappingFamily& family) : family_(&family) {
    store_evaluations_ = family.rows() * family.cols() < family.point_dim();
  }

  const Matrix& init(const Vector& x0, SampleLedger& ledger) {
    if (family_->sampler() != SamplerKind::kFinite) {
      throw EstimatorError("SagaEstimator: requires a finite family");
    }
    const Index n = family_->size();
    const std::vector<Index> all = full_batch(n);
    u_ = batch_average(*family_, all, x0);
    ledger.charge(n);
    fill_table(x0);
    v_ = u_;
    started_ = true;
    return v_;
  }

  const Matrix& step(const Vector& x_new, Index batch_size, Rng& rng, SampleLedger& ledger) {
    ensure_started();
    const std::vector<Index> batch = step_batch(*family_, batch_size, rng);
    return step_with(x_new, batch, ledger);
  }

  const Matrix& step_with(const Vector& x_new, std::span<const Index> batch, SampleLedger& ledger) {
    ensure_started();
    if (batch.empty()) throw InvalidArgument("SagaEstimator: empty batch");
    const Index n = family_->size();
    ledger.charge(2 * batch.size());

    if (is_full_ordered(batch, n)) {
      // Every entry is replaced; the estimate is the exact average at x_new.
      v_ = batch_average(*family_, batch, x_new);
      u_ = v_;
      fill_table(x_new);
      return v_;
    }

    const Eigen::Index r = static_cast<Eigen::Index>(family_->rows());
    const Eigen::Index c = static_cast<Eigen::Index>(family_->cols());
    Matrix correction = Matrix::Zero(r, c);
    Matrix table_update = Matrix::Zero(r, c);
    std::vector<Index> distinct(batch.begin(), batch.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<Matrix> fresh(distinct.size());
    std::vector<Matrix> diff(distinct.size());
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      const Index i = distinct[k];
      fresh[k] = family_->evaluate(i, x_new);
      diff[k] = fresh[k] - stored_value(i);
    }
    for (Index i : batch) {
      const auto pos = std::lower_bound(distinct.begin(), distinct.end(), i) - distinct.begin();
      correction += diff[static_cast<std::size_t>(pos)];
    }
    for (std::size_t k = 0; k < distinct.size(); ++k) table_update += diff[k];

    v_ = u_ + correction / static_cast<double>(batch.size());
    u_ += table_update / static_cast<double>(n);
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      const Index i = distinct[k];
      if (store_evaluations_) {
        evaluations_[i] = std::move(fresh[k]);
      } else {
        points_[i] = x_new;
      }
    }
    return v_;
  }

  /// Recomputes u from the table. Returns the max-abs drift of the running average.
  double revalidate() {
    ensure_started();
    const Index n = family_->size();
    Matrix exact = Matrix::Zero(static_cast<Eigen::Index>(family_->rows()),
                                static_cast<Eigen::Index>(family_->cols()));
    for (Index i = 0; i < n; ++i) exact += stored_value(i);
    exact /= static_cast<double>(n);
    const double drift = (exact - u_).cwiseAbs().maxCoeff();
    u_ = exact;
    return drift;
  }

  // Current phi_i(alpha_i).
  Matrix stored_value(Index i) const {
    return store_evaluations_ ? evaluations_.at(i) : family_->evaluate(i, points_.at(i));
  }

  const Matrix& value() const { return v_; }
  const Matrix& table_average() const { return u_; }
  bool stores_evaluations() const { return store_evaluations_; }
  bool started() const { return started_; }

  // Forces the table layout; both layouts produce the same estimates.
  void set_store_evaluations(bool on) {
    if (started_) throw EstimatorError("SagaEstimator: layout must be chosen before init");
    store_evaluations_ = on;
  }

 private:
  void ensure_started() const {
    if (!started_) throw EstimatorError("SagaEstimator: step called before init");
  }

  void fill_table(const Vector& x) {
    const Index n = family_->size();
    if (store_evaluations_) {
      evaluations_.resize(n);
      for (Index i = 0; i < n; ++i) evaluations_[i] = family_->evaluate(i, x);
      points_.clear();
    } else {
      points_.assign(n, x);
      evaluations_.clear();
    }
  }

  const MappingFamily* family_;
  bool store_evaluations_ = false;
  bool started_ = false;
  Matrix v_;
  Matrix u_;
  std::vector<Vector> points_;
  std::vector<Matrix> evaluations_;
};

}  // namespace npag
