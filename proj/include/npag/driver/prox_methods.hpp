#pragma once

#include <optional>
#include <string>

#include "npag/driver/sources.hpp"
#include "npag/schedules/one_level.hpp"

namespace npag {

enum class OneLevelMethod { kExact, kSpider, kSvrg, kSaga };

/// Overrides for the one-level drivers. Anything left unset is derived from the problem.
struct OneLevelOptions {
  std::optional<double> eta;      // default 1/(2L)
  std::optional<double> epsilon;  // target accuracy; constant plan unless `plan` is set
  std::optional<EpsilonPlan> plan;
  std::optional<Index> tau;
  std::optional<Index> big_batch;
  std::optional<Index> small_batch;
  Index iterations = 0;
  std::uint64_t seed = 0;
  Index diagnostic_cadence = 0;
  double stop_tolerance = 0.0;
  Vector x0;
};

struct OneLevelRun {
  RunTrace trace;
  OneLevelParams params;
  double eta = 1.0;
  EpsilonPlan plan = EpsilonPlan::constant(1.0, 1);
  // Samples the run is expected to charge, from the parameters alone.
  std::uint64_t predicted_samples = 0;
};

/// Default parameters for a one-level method on `problem` at accuracy eps. Finite levels
/// use the finite-sum settings; stream levels need sigma metadata.
inline OneLevelParams default_one_level_params(const CompositionProblem& problem,
                                               OneLevelMethod method, std::optional<double> eps) {
  require(problem.levels() == 1, "one-level methods require m = 1");
  const auto& lv = problem.level(0);
  const Index n = lv.oracle->component_count();
  const bool finite = lv.oracle->sampler() == SamplerKind::kFinite;
  switch (method) {
    case OneLevelMethod::kExact:
      return {1, n, n};
    case OneLevelMethod::kSpider:
      if (finite) return spider_finite_sum(n);
      if (!eps) throw InvalidArgument("prox-spider: expectation mode needs a target epsilon");
      if (!(lv.smoothness.sigma > 0.0)) throw InvalidArgument("prox-spider: missing sigma in expectation mode");
      return spider_expectation(lv.smoothness.sigma, *eps);
    case OneLevelMethod::kSvrg:
      if (finite) return svrg_finite_sum(n);
      if (!eps) throw InvalidArgument("prox-svrg: expectation mode needs a target epsilon");
      if (!(lv.smoothness.sigma > 0.0)) throw InvalidArgument("prox-svrg: missing sigma in expectation mode");
      return svrg_expectation(lv.smoothness.sigma, *eps);
    case OneLevelMethod::kSaga:
      if (!finite) throw InvalidArgument("prox-saga: requires a finite-sum problem");
      return saga_finite_sum(n);
  }
  return {};
}

/// Samples charged by T iterations of a one-level method under `plan`.
inline std::uint64_t predicted_one_level_samples(const CompositionProblem& problem,
                                                 OneLevelMethod method, const OneLevelParams& p,
                                                 const EpsilonPlan& plan, Index T) {
  const auto& oracle = *problem.level(0).oracle;
  const Index n = oracle.component_count();
  const bool finite = oracle.sampler() == SamplerKind::kFinite;
  const std::uint64_t restart = finite ? std::min(p.big_batch, n) : p.big_batch;
  const std::uint64_t step = 2 * (finite ? std::min(p.small_batch, n) : p.small_batch);
  if (method == OneLevelMethod::kExact) return static_cast<std::uint64_t>(T) * problem.exact_gradient_cost();
  if (method == OneLevelMethod::kSaga) return n + (T > 0 ? (T - 1) * step : 0);
  std::uint64_t total = 0;
  StageCursor cursor(plan);
  for (Index t = 0; t < T; ++t) {
    total += cursor.at_restart() ? restart : step;
    cursor.advance();
  }
  return total;
}

namespace detail {

inline OneLevelRun prepare_one_level(const CompositionProblem& problem, OneLevelMethod method,
                                     const OneLevelOptions& opt) {
  require(problem.levels() == 1, "one-level methods require m = 1");
  OneLevelRun run;
  run.params = default_one_level_params(problem, method, opt.epsilon);
  if (opt.tau) run.params.tau = *opt.tau;
  if (opt.big_batch) run.params.big_batch = *opt.big_batch;
  if (opt.small_batch) run.params.small_batch = *opt.small_batch;
  require(run.params.tau >= 1 && run.params.big_batch >= 1 && run.params.small_batch >= 1,
          "one-level parameters must be >= 1");
  run.eta = opt.eta ? *opt.eta : 1.0 / (2.0 * problem.level(0).smoothness.L);
  if (opt.plan) {
    run.plan = *opt.plan;
  } else {
    if (!opt.epsilon) throw InvalidArgument("one-level run: epsilon or an epsilon plan is required");
    run.plan = EpsilonPlan::constant(*opt.epsilon, run.params.tau);
  }
  return run;
}

template <class Source>
OneLevelRun finish_one_level(const CompositionProblem& problem, OneLevelMethod method,
                             OneLevelRun run, Source& source, const OneLevelOptions& opt) {
  NpagConfig cfg;
  cfg.eta = run.eta;
  cfg.epsilon = run.plan;
  cfg.iterations = opt.iterations;
  cfg.seed = opt.seed;
  cfg.diagnostic_cadence = opt.diagnostic_cadence;
  cfg.stop_tolerance = opt.stop_tolerance;
  cfg.x0 = opt.x0;
  run.trace = run_npag(problem, source, cfg);
  run.predicted_samples =
      predicted_one_level_samples(problem, method, run.params, run.plan, run.trace.records.size());
  return run;
}

}  // namespace detail

/// NPAG with exact gradients.
inline OneLevelRun run_npag_exact(const CompositionProblem& problem, const OneLevelOptions& opt) {
  detail::require_exact(problem, "run_npag_exact");
  OneLevelRun run;
  run.params = {1, 1, 1};
  const double L = problem.levels() == 1 ? problem.level(0).smoothness.L : 1.0;
  run.eta = opt.eta ? *opt.eta : 1.0 / (2.0 * L);
  if (opt.plan) {
    run.plan = *opt.plan;
  } else {
    if (!opt.epsilon) throw InvalidArgument("run_npag_exact: epsilon or an epsilon plan is required");
    run.plan = EpsilonPlan::constant(*opt.epsilon, opt.tau.value_or(1));
  }
  ExactGradientSource source(problem);
  NpagConfig cfg;
  cfg.eta = run.eta;
  cfg.epsilon = run.plan;
  cfg.iterations = opt.iterations;
  cfg.seed = opt.seed;
  cfg.diagnostic_cadence = opt.diagnostic_cadence;
  cfg.stop_tolerance = opt.stop_tolerance;
  cfg.x0 = opt.x0;
  run.trace = run_npag(problem, source, cfg);
  run.predicted_samples = run.trace.records.size() * problem.exact_gradient_cost();
  return run;
}

/// Prox-SPIDER: SPIDER restarted at the first iteration of every stage.
inline OneLevelRun run_prox_spider(const CompositionProblem& problem, const OneLevelOptions& opt) {
  OneLevelRun run = detail::prepare_one_level(problem, OneLevelMethod::kSpider, opt);
  SpiderSource source(problem, run.params.big_batch, run.params.small_batch);
  return detail::finish_one_level(problem, OneLevelMethod::kSpider, std::move(run), source, opt);
}

inline OneLevelRun run_prox_svrg(const CompositionProblem& problem, const OneLevelOptions& opt) {
  OneLevelRun run = detail::prepare_one_level(problem, OneLevelMethod::kSvrg, opt);
  SvrgSource source(problem, run.params.big_batch, run.params.small_batch);
  return detail::finish_one_level(problem, OneLevelMethod::kSvrg, std::move(run), source, opt);
}

inline OneLevelRun run_prox_saga(const CompositionProblem& problem, const OneLevelOptions& opt) {
  OneLevelRun run = detail::prepare_one_level(problem, OneLevelMethod::kSaga, opt);
  SagaSource source(problem, run.params.small_batch);
  return detail::finish_one_level(problem, OneLevelMethod::kSaga, std::move(run), source, opt);
}

}  // namespace npag
