#pragma once

#include <span>
#include <vector>

#include "npag/estimators/minibatch.hpp"

namespace npag {

/// SVRG estimator anchored at a snapshot: v^t = v^0 + phi_{B_t}(x^t) - phi_{B_t}(x^0).
class SvrgEstimator {
 public:
  explicit SvrgEstimator(const MappingFamily& family) : family_(&family) {}

  const Matrix& restart(const Vector& x, Index batch_size, Rng& rng, SampleLedger& ledger) {
    const std::vector<Index> batch = restart_batch(*family_, batch_size, rng);
    return restart_with(x, batch, ledger);
  }

  const Matrix& restart_with(const Vector& x, std::span<const Index> batch, SampleLedger& ledger) {
    snapshot_value_ = batch_average(*family_, batch, x);
    ledger.charge(batch.size());
    snapshot_ = x;
    v_ = snapshot_value_;
    steps_ = 0;
    started_ = true;
    snapshot_exact_ = covers_family(batch);
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
    if (snapshot_exact_ && covers_family(batch)) {
      v_ = batch_average(*family_, batch, x_new);
    } else {
      v_ = snapshot_value_ + (batch_average(*family_, batch, x_new) -
                              batch_average(*family_, batch, snapshot_));
    }
    ++steps_;
    return v_;
  }

  const Matrix& value() const { return v_; }
  const Matrix& snapshot_value() const { return snapshot_value_; }
  const Vector& snapshot() const { return snapshot_; }
  Index steps_since_restart() const { return steps_; }
  bool started() const { return started_; }

 private:
  void ensure_started() const {
    if (!started_) throw EstimatorError("SvrgEstimator: step called before restart");
  }
  bool covers_family(std::span<const Index> batch) const {
    return family_->sampler() == SamplerKind::kFinite && is_full_ordered(batch, family_->size());
  }

  const MappingFamily* family_;
  Matrix v_;
  Matrix snapshot_value_;
  Vector snapshot_;
  Index steps_ = 0;
  bool started_ = false;
  bool snapshot_exact_ = false;
};

}  // namespace npag
