#pragma once

#include <vector>

#include "npag/driver/npag.hpp"
#include "npag/estimators/spider.hpp"
#include "npag/nested/chain_product.hpp"
#include "npag/schedules/nested_schedule.hpp"

namespace npag {

/// State of the multi-level nested estimator: SPIDER recursions for the mappings
/// y_i (levels 1..m-1) and for the Jacobians z_i (levels 1..m). Both estimators at a
/// level are queried at y_{i-1}, with independently drawn batches.
class NestedState {
 public:
  explicit NestedState(const CompositionProblem& problem) : problem_(&problem) {
    const Index m = problem.levels();
    for (Index i = 0; i < m; ++i) {
      jacobians_.emplace_back(problem.jacobian_family(i));
      if (i + 1 < m) mappings_.emplace_back(problem.value_family(i));
    }
    z_.resize(m);
    y_.resize(m - 1);
    y_prev_.resize(m - 1);
  }

  Index levels() const { return problem_->levels(); }
  bool started() const { return started_; }
  // Mapping estimate y_i (0-based level i < m - 1) and its previous-iteration value.
  const Vector& mapping(Index i) const { return y_.at(i); }
  const Vector& previous_mapping(Index i) const { return y_prev_.at(i); }
  // Jacobian estimate z_i (0-based level i).
  const Matrix& jacobian(Index i) const { return z_.at(i); }
  const Vector& gradient() const { return v_; }

  /// Restart every estimator from fresh mini-batches at x. Returns v = chain_product(z).
  const Vector& restart(const Vector& x, const StageBatches& sb, std::uint64_t seed, Index stage,
                        Index t, SampleLedger& ledger) {
    check_batches(sb);
    require_dims(static_cast<Index>(x.size()) == problem_->dimension(), "nested restart: dimension mismatch");
    const Index m = levels();
    Vector y = x;
    for (Index i = 0; i < m; ++i) {
      Rng jr = substream(seed, stage, t, i + 1, DrawRole::kJacobian);
      z_[i] = jacobians_[i].restart(y, sb.B[i], jr, ledger);
      if (i + 1 < m) {
        Rng mr = substream(seed, stage, t, i + 1, DrawRole::kMapping);
        const Matrix& ym = mappings_[i].restart(y, sb.S[i], mr, ledger);
        y_prev_[i] = ym.col(0);
        y_[i] = ym.col(0);
        y = y_[i];
      }
    }
    started_ = true;
    v_ = chain_product(z_);
    return v_;
  }

  /// One recursive step at x_new: differences of the same batch at the new and previous
  /// query points are added to every estimate.
  const Vector& step(const Vector& x_new, const StageBatches& sb, std::uint64_t seed, Index stage,
                     Index t, SampleLedger& ledger) {
    if (!started_) throw EstimatorError("nested step called before restart");
    check_batches(sb);
    require_dims(static_cast<Index>(x_new.size()) == problem_->dimension(), "nested step: dimension mismatch");
    const Index m = levels();
    Vector y = x_new;
    for (Index i = 0; i < m; ++i) {
      Rng jr = substream(seed, stage, t, i + 1, DrawRole::kJacobian);
      z_[i] = jacobians_[i].step(y, sb.b[i], jr, ledger);
      if (i + 1 < m) {
        Rng mr = substream(seed, stage, t, i + 1, DrawRole::kMapping);
        y_prev_[i] = y_[i];
        y_[i] = mappings_[i].step(y, sb.s[i], mr, ledger).col(0);
        y = y_[i];
      }
    }
    v_ = chain_product(z_);
    return v_;
  }

 private:
  void check_batches(const StageBatches& sb) const {
    const Index m = levels();
    require(sb.B.size() == m && sb.b.size() == m, "nested: need m Jacobian batch sizes");
    require(sb.S.size() + 1 == m && sb.s.size() + 1 == m, "nested: need m-1 mapping batch sizes");
  }

  const CompositionProblem* problem_;
  std::vector<SpiderEstimator> jacobians_;
  std::vector<SpiderEstimator> mappings_;
  std::vector<Matrix> z_;
  std::vector<Vector> y_;
  std::vector<Vector> y_prev_;
  Vector v_;
  bool started_ = false;
};

// Gradient source that follows a NestedSchedule stage by stage.
class NestedSpiderSource {
 public:
  NestedSpiderSource(const CompositionProblem& problem, const NestedSchedule& schedule)
      : state_(problem), schedule_(&schedule) {
    require(schedule.levels == problem.levels(), "nested-spider: schedule and problem differ in m");
    validate_schedule(schedule);
  }

  Vector estimate(const IterationContext& ctx, const Vector& x, SampleLedger& ledger) {
    require(ctx.stage >= 1 && ctx.stage <= schedule_->stages.size(), "nested-spider: stage out of range");
    const StageBatches& sb = schedule_->stages[ctx.stage - 1].batches;
    if (ctx.restart()) return state_.restart(x, sb, ctx.seed, ctx.stage, ctx.t, ledger);
    return state_.step(x, sb, ctx.seed, ctx.stage, ctx.t, ledger);
  }

  const NestedState& state() const { return state_; }

 private:
  NestedState state_;
  const NestedSchedule* schedule_;
};

struct NestedRunConfig {
  double eta = 1.0;
  std::uint64_t seed = 0;
  Index diagnostic_cadence = 0;
  double stop_tolerance = 0.0;
  Vector x0;
};

/// Multi-level Nested-SPIDER: NPAG over the stages of `schedule`, T = sum_k tau_k.
inline RunTrace run_nested_spider(const CompositionProblem& problem, const NestedSchedule& schedule,
                                  const NestedRunConfig& config) {
  NestedSpiderSource source(problem, schedule);
  NpagConfig cfg;
  cfg.eta = config.eta;
  cfg.epsilon = schedule.epsilon_plan();
  cfg.iterations = schedule.total_iterations();
  cfg.seed = config.seed;
  cfg.diagnostic_cadence = config.diagnostic_cadence;
  cfg.stop_tolerance = config.stop_tolerance;
  cfg.x0 = config.x0;
  return run_npag(problem, source, cfg);
}

}  // namespace npag
