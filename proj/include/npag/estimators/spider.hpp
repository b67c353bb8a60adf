#pragma once

#include <span>
#include <vector>

#include "npag/estimators/minibatch.hpp"

namespace npag {

/// SARAH/SPIDER recursion
///   v^0 = phi_{B_0}(x^0),   v^t = v^{t-1} + phi_{B_t}(x^t) - phi_{B_t}(x^{t-1}).
/// Both terms of a step are evaluated on the same batch, so a step charges 2|B_t|.
class SpiderEstimator {
 public:
  explicit SpiderEstimator(const MappingFamily& family) : family_(&family) {}

  const Matrix& restart(const Vector& x, Index batch_size, Rng& rng, SampleLedger& ledger) {
    const std::vector<Index> batch = restart_batch(*family_, batch_size, rng);
    return restart_with(x, batch, ledger);
  }

  const Matrix& restart_with(const Vector& x, std::span<const Index> batch, SampleLedger& ledger) {
    v_ = batch_average(*family_, batch, x);
    ledger.charge(batch.size());
    x_prev_ = x;
    steps_ = 0;
    started_ = true;
    exact_ = covers_family(batch);
    return v_;
  }

  const Matrix& step(const Vector& x_new, Index batch_size, Rng& rng, SampleLedger& ledger) {
    ensure_started();
    const std::vector<Index> batch = step_batch(*family_, batch_size, rng);
    return step_with(x_new, batch, ledger);
  }

  const Matrix& step_with(const Vector& x_new, std::span<const Index> batch, SampleLedger& ledger) {
    ensure_started();
    ledger.charge(2 * batch.size());
    exact_ = exact_ && covers_family(batch);
    if (exact_) {
      // Full batches since the restart telescope to the exact average.
      v_ = batch_average(*family_, batch, x_new);
    } else {
      v_ += batch_average(*family_, batch, x_new) - batch_average(*family_, batch, x_prev_);
    }
    x_prev_ = x_new;
    ++steps_;
    return v_;
  }

  const Matrix& value() const { return v_; }
  const Vector& previous_point() const { return x_prev_; }
  Index steps_since_restart() const { return steps_; }
  bool started() const { return started_; }
  const MappingFamily& family() const { return *family_; }

 private:
  void ensure_started() const {
    if (!started_) throw EstimatorError("SpiderEstimator: step called before restart");
  }
  bool covers_family(std::span<const Index> batch) const {
    return family_->sampler() == SamplerKind::kFinite &&
           is_full_ordered(batch, family_->size());
  }

  const MappingFamily* family_;
  Matrix v_;
  Vector x_prev_;
  Index steps_ = 0;
  bool started_ = false;
  bool exact_ = false;
};

}  // namespace npag
