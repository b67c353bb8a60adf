#pragma once

#include "npag/driver/npag.hpp"
#include "npag/estimators/saga.hpp"
#include "npag/estimators/spider.hpp"
#include "npag/estimators/svrg.hpp"

namespace npag {

// Exact chain-rule gradient; charges one full pass per iteration.
class ExactGradientSource {
 public:
  explicit ExactGradientSource(const CompositionProblem& problem) : problem_(&problem) {}

  Vector estimate(const IterationContext&, const Vector& x, SampleLedger& ledger) {
    ledger.charge(problem_->exact_gradient_cost());
    return full_gradient(*problem_, x);
  }

 private:
  const CompositionProblem* problem_;
};

namespace detail {
inline const MappingFamily& single_level_gradient_family(const CompositionProblem& problem,
                                                         const char* who) {
  if (problem.levels() != 1) {
    throw InvalidArgument(std::string(who) + ": requires a one-level problem");
  }
  return problem.jacobian_family(0);
}

inline Rng gradient_rng(const IterationContext& ctx) {
  return substream(ctx.seed, ctx.stage, ctx.t, 1, DrawRole::kJacobian);
}

inline Vector as_gradient(const Matrix& row) { return row.transpose(); }
}  // namespace detail

/// SPIDER gradient estimates, restarted with batch B at the first iteration of every
/// stage and stepped with batch b otherwise.
class SpiderSource {
 public:
  SpiderSource(const CompositionProblem& problem, Index big_batch, Index small_batch)
      : est_(detail::single_level_gradient_family(problem, "SpiderSource")),
        big_(big_batch), small_(small_batch) {
    require(big_ >= 1 && small_ >= 1, "SpiderSource: batch sizes must be >= 1");
  }

  Vector estimate(const IterationContext& ctx, const Vector& x, SampleLedger& ledger) {
    Rng rng = detail::gradient_rng(ctx);
    if (ctx.restart()) return detail::as_gradient(est_.restart(x, big_, rng, ledger));
    return detail::as_gradient(est_.step(x, small_, rng, ledger));
  }

  const SpiderEstimator& estimator() const { return est_; }

 private:
  SpiderEstimator est_;
  Index big_, small_;
};

class SvrgSource {
 public:
  SvrgSource(const CompositionProblem& problem, Index big_batch, Index small_batch)
      : est_(detail::single_level_gradient_family(problem, "SvrgSource")),
        big_(big_batch), small_(small_batch) {
    require(big_ >= 1 && small_ >= 1, "SvrgSource: batch sizes must be >= 1");
  }

  Vector estimate(const IterationContext& ctx, const Vector& x, SampleLedger& ledger) {
    Rng rng = detail::gradient_rng(ctx);
    if (ctx.restart()) return detail::as_gradient(est_.restart(x, big_, rng, ledger));
    return detail::as_gradient(est_.step(x, small_, rng, ledger));
  }

 private:
  SvrgEstimator est_;
  Index big_, small_;
};

// SAGA: the table is filled at the first iteration, every later iteration is a step.
class SagaSource {
 public:
  SagaSource(const CompositionProblem& problem, Index small_batch)
      : est_(detail::single_level_gradient_family(problem, "SagaSource")), small_(small_batch) {
    require(small_ >= 1, "SagaSource: batch size must be >= 1");
  }

  Vector estimate(const IterationContext& ctx, const Vector& x, SampleLedger& ledger) {
    if (!initialized_) {
      initialized_ = true;
      return detail::as_gradient(est_.init(x, ledger));
    }
    Rng rng = detail::gradient_rng(ctx);
    return detail::as_gradient(est_.step(x, small_, rng, ledger));
  }

  const SagaEstimator& estimator() const { return est_; }

 private:
  SagaEstimator est_;
  Index small_;
  bool initialized_ = false;
};

}  // namespace npag
