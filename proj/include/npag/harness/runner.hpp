#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "npag/benchmarks/classification.hpp"
#include "npag/benchmarks/portfolio.hpp"
#include "npag/benchmarks/synthetic.hpp"
#include "npag/driver/prox_methods.hpp"
#include "npag/harness/config.hpp"
#include "npag/harness/trace_io.hpp"
#include "npag/nested/nested_spider.hpp"
#include "npag/schedules/nested_schedule.hpp"

namespace npag::harness {

struct BuiltProblem {
  std::shared_ptr<const CompositionProblem> problem;
  std::vector<Index> components;  // N_i per level
  bool finite = true;
  std::string description;
};

/// Loads or generates the benchmark data and builds the problem. Data errors surface as
/// ParseError.
inline BuiltProblem build_problem(const ProblemConfig& p) {
  BuiltProblem out;
  if (p.benchmark == "logistic-difference" || p.benchmark == "two-layer-nn") {
    std::shared_ptr<SparseDataset> data;
    if (p.data.empty()) {
      data = std::make_shared<SparseDataset>(make_sparse_dataset(p.samples, p.features, p.density, p.data_seed));
      out.description = "synthetic sparse data";
    } else {
      SparseFormatOptions fo;
      if (p.relabel_positive) fo.relabel = LabelMap{*p.relabel_positive, *p.relabel_negative, true};
      data = std::make_shared<SparseDataset>(parse_sparse_dataset(p.data, fo));
      out.description = p.data;
    }
    if (data->size() == 0) throw ParseError("dataset has no examples");
    if (data->dimension() == 0) throw ParseError("dataset has no features");
    const double beta = p.beta.value_or(1.0 / static_cast<double>(data->size()));
    out.problem = std::make_shared<CompositionProblem>(
        p.benchmark == "logistic-difference" ? logistic_difference_problem(data, beta)
                                             : two_layer_nn_problem(data, beta));
  } else if (p.benchmark == "portfolio") {
    std::shared_ptr<PayoffMatrix> data;
    if (p.data.empty()) {
      data = std::make_shared<PayoffMatrix>(make_payoffs(p.samples, p.features, p.data_seed));
      out.description = "synthetic payoffs";
    } else {
      data = std::make_shared<PayoffMatrix>(parse_payoff_csv(p.data, p.csv_header));
      out.description = p.data;
    }
    PortfolioOptions po;
    po.lambda = p.lambda;
    po.beta = p.beta.value_or(0.01);
    po.radius = p.radius;
    out.problem = std::make_shared<CompositionProblem>(portfolio_problem(data, po));
  } else if (p.benchmark == "synthetic-composition") {
    SyntheticOptions so;
    so.dims = p.dims;
    so.components = p.components;
    so.hidden = p.hidden;
    if (p.beta && *p.beta > 0.0) so.regularizer = l1_regularizer(*p.beta);
    out.problem = std::make_shared<CompositionProblem>(synthetic_composition(so, p.data_seed));
    out.description = "synthetic composition";
  } else {
    throw ConfigError("problem.benchmark: unknown benchmark '" + p.benchmark + "'");
  }
  for (Index i = 0; i < out.problem->levels(); ++i) {
    const auto& oracle = *out.problem->level(i).oracle;
    out.components.push_back(oracle.component_count());
    out.finite = out.finite && oracle.sampler() == SamplerKind::kFinite;
  }
  return out;
}

/// Fully resolved method parameters shared by every seed.
struct MethodPlan {
  std::string method;
  double eta = 1.0;
  OneLevelMethod kind = OneLevelMethod::kSpider;
  OneLevelParams params;
  EpsilonPlan plan = EpsilonPlan::constant(1.0, 1);
  Index iterations = 0;
  std::optional<NestedSchedule> schedule;
  CompositeConstants constants;
  std::uint64_t predicted_samples = 0;
  std::vector<std::string> notes;
};

namespace detail {

inline Index root_ceil(Index n) { return ceil_count(std::sqrt(static_cast<double>(n))); }

inline EpsilonPlan experiment_plan(const MethodConfig& m, Index tau) {
  if (m.epsilon_schedule == "constant") {
    return EpsilonPlan::constant(m.epsilon.value_or(m.epsilon_scale), tau);
  }
  return EpsilonPlan::power(m.epsilon_scale, m.epsilon_power, tau);
}

inline void require_iterations(const RunSection& r) {
  if (r.iterations == 0) throw ConfigError("run.iterations: required for this method");
}

}  // namespace detail

inline MethodPlan resolve_method(const RunConfig& cfg, const BuiltProblem& built) {
  const CompositionProblem& problem = *built.problem;
  const MethodConfig& m = cfg.method;
  const bool theory = m.preset == "theory";
  MethodPlan plan;
  plan.method = m.name;
  plan.constants = compose_constants(problem);
  const Index n_max = *std::max_element(built.components.begin(), built.components.end());

  if (m.name == "nested-spider") {
    const Index levels = problem.levels();
    if (theory) {
      if (!m.epsilon) throw ConfigError("method.epsilon: the theory preset needs a target epsilon");
      ScheduleOptions so;
      so.theta = m.theta;
      so.gap = m.gap;
      so.constant_epsilon = m.constant_epsilon;
      const bool finite_mode = m.nested_mode == "finite-sum" || (m.nested_mode == "auto" && built.finite);
      if (finite_mode) {
        plan.schedule = nested_schedule_finite_sum(plan.constants, levels, built.components, *m.epsilon, so);
      } else {
        plan.schedule = nested_schedule_expectation(plan.constants, levels, *m.epsilon, so);
        if (built.finite) {
          for (auto& st : plan.schedule->stages) npag::detail::clamp_to(st.batches, built.components);
        }
      }
      plan.eta = m.eta.value_or(1.0 / (2.0 * plan.constants.L_F));
    } else {
      const Index tau = m.tau.value_or(detail::root_ceil(n_max));
      Index stages = cfg.run.stages;
      if (stages == 0) {
        detail::require_iterations(cfg.run);
        stages = (cfg.run.iterations + tau - 1) / tau;
      }
      const Index b = m.small_batch.value_or(detail::root_ceil(n_max));
      const Index s = m.map_small_batch.value_or(b);
      const double scale = m.epsilon_schedule == "constant" ? m.epsilon.value_or(m.epsilon_scale) : m.epsilon_scale;
      const double power = m.epsilon_schedule == "constant" ? 0.0 : m.epsilon_power;
      plan.schedule = nested_schedule_practical(plan.constants, levels, built.components, stages, scale,
                                                power, tau, b, s);
      for (auto& st : plan.schedule->stages) {
        for (Index i = 0; i < levels; ++i) {
          if (m.big_batch) st.batches.B[i] = std::min(*m.big_batch, built.components[i]);
          if (i + 1 < levels && m.map_batch) st.batches.S[i] = std::min(*m.map_batch, built.components[i]);
        }
      }
      plan.eta = m.eta.value_or(0.1);
    }
    plan.notes = plan.schedule->notes;
    plan.plan = plan.schedule->epsilon_plan();
    plan.iterations = plan.schedule->total_iterations();
    plan.predicted_samples = predicted_sample_count(*plan.schedule);
    return plan;
  }

  if (m.name == "npag-exact") {
    plan.kind = OneLevelMethod::kExact;
    const Index tau = m.tau.value_or(1);
    if (theory) {
      if (!m.epsilon) throw ConfigError("method.epsilon: the theory preset needs a target epsilon");
      plan.plan = EpsilonPlan::constant(*m.epsilon, tau);
      plan.eta = m.eta.value_or(1.0 / (2.0 * plan.constants.L_F));
    } else {
      plan.plan = detail::experiment_plan(m, tau);
      plan.eta = m.eta.value_or(1.0);
    }
    detail::require_iterations(cfg.run);
    plan.iterations = cfg.run.iterations;
    plan.params = {tau, 1, 1};
    plan.predicted_samples = static_cast<std::uint64_t>(plan.iterations) * problem.exact_gradient_cost();
    return plan;
  }

  plan.kind = m.name == "prox-spider" ? OneLevelMethod::kSpider
              : m.name == "prox-svrg" ? OneLevelMethod::kSvrg
                                      : OneLevelMethod::kSaga;
  if (problem.levels() != 1) throw ConfigError("method.name: " + m.name + " requires a one-level problem");
  const Index n = built.components[0];
  if (theory) {
    plan.params = default_one_level_params(problem, plan.kind, m.epsilon);
    if (!m.epsilon) throw ConfigError("method.epsilon: the theory preset needs a target epsilon");
    plan.eta = m.eta.value_or(1.0 / (2.0 * plan.constants.L_F));
  } else {
    if (!built.finite) throw ConfigError("method.preset: the experiment preset needs a finite-sum problem");
    const double nd = static_cast<double>(n);
    if (plan.kind == OneLevelMethod::kSpider) {
      plan.params = {detail::root_ceil(n), n, detail::root_ceil(n)};
    } else {
      plan.params = {ceil_count(std::cbrt(nd)), n, std::min(n, ceil_count(std::pow(nd, 2.0 / 3.0)))};
    }
    plan.eta = m.eta.value_or(1.0);
  }
  if (m.tau) plan.params.tau = *m.tau;
  if (m.big_batch) plan.params.big_batch = *m.big_batch;
  if (m.small_batch) plan.params.small_batch = *m.small_batch;
  plan.plan = theory ? EpsilonPlan::constant(*m.epsilon, plan.params.tau)
                     : detail::experiment_plan(m, plan.params.tau);
  detail::require_iterations(cfg.run);
  plan.iterations = cfg.run.iterations;
  plan.predicted_samples =
      predicted_one_level_samples(problem, plan.kind, plan.params, plan.plan, plan.iterations);
  return plan;
}

/// Runs one seed of a resolved plan.
inline RunTrace run_seed(const CompositionProblem& problem, const MethodPlan& plan, const RunSection& run,
                         std::uint64_t seed) {
  if (plan.schedule) {
    NestedRunConfig nc;
    nc.eta = plan.eta;
    nc.seed = seed;
    nc.diagnostic_cadence = run.diagnostic_cadence;
    nc.stop_tolerance = run.stop_tolerance;
    return run_nested_spider(problem, *plan.schedule, nc);
  }
  OneLevelOptions opt;
  opt.eta = plan.eta;
  opt.plan = plan.plan;
  opt.tau = plan.params.tau;
  opt.big_batch = plan.params.big_batch;
  opt.small_batch = plan.params.small_batch;
  opt.iterations = plan.iterations;
  opt.seed = seed;
  opt.diagnostic_cadence = run.diagnostic_cadence;
  opt.stop_tolerance = run.stop_tolerance;
  switch (plan.kind) {
    case OneLevelMethod::kExact:
      return run_npag_exact(problem, opt).trace;
    case OneLevelMethod::kSpider:
      return run_prox_spider(problem, opt).trace;
    case OneLevelMethod::kSvrg:
      return run_prox_svrg(problem, opt).trace;
    case OneLevelMethod::kSaga:
      return run_prox_saga(problem, opt).trace;
  }
  throw ConfigError("unknown method");
}

/// Worker count: the configured value (0 means hardware concurrency), capped by the
/// NPAG_MAX_WORKERS environment variable and the number of seeds.
inline Index worker_count(const RunSection& run) {
  Index w = run.workers > 0 ? run.workers : std::max<Index>(1, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("NPAG_MAX_WORKERS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0' && v >= 1) w = std::min<Index>(w, static_cast<Index>(v));
  }
  return std::max<Index>(1, std::min<Index>(w, run.seeds.size()));
}

struct RunReport {
  MethodPlan plan;
  std::vector<SeedResult> results;  // in the configured seed order
  std::vector<AggregatePoint> curve;

  Index failures() const {
    return static_cast<Index>(std::count_if(results.begin(), results.end(), [](const SeedResult& r) { return !r.ok; }));
  }
};

/// Runs every seed concurrently. A failing seed is recorded and does not stop the others.
inline RunReport run_experiment(const RunConfig& cfg, const BuiltProblem& built) {
  RunReport report;
  report.plan = resolve_method(cfg, built);
  const auto& seeds = cfg.run.seeds;
  report.results.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t k = next++; k < seeds.size(); k = next++) {
      SeedResult& r = report.results[k];
      r.seed = seeds[k];
      try {
        r.trace = run_seed(*built.problem, report.plan, cfg.run, seeds[k]);
        r.ok = true;
        if (built.problem->has_exact_oracles()) {
          r.output_mapping_norm = exact_gradient_mapping(*built.problem, r.trace.output, report.plan.eta).mapping_norm;
        }
      } catch (const DivergenceError& e) {
        r.error = std::string(e.what()) + " (iteration " + std::to_string(e.iteration()) + ")";
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const Index workers = worker_count(cfg.run);
  std::vector<std::thread> pool;
  for (Index w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<const SeedResult*> ptrs;
  for (const auto& r : report.results) ptrs.push_back(&r);
  report.curve = aggregate(ptrs);
  return report;
}

/// Writes trace.csv, aggregate.csv, config.ini and schedule.ini into `dir`.
inline void write_outputs(const std::string& dir, const RunConfig& cfg, const RunReport& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  std::vector<const SeedResult*> ptrs;
  for (const auto& r : report.results) ptrs.push_back(&r);
  {
    auto out = open("trace.csv");
    write_trace(out, ptrs);
  }
  {
    auto out = open("aggregate.csv");
    write_aggregate(out, report.curve);
  }
  {
    auto out = open("config.ini");
    out << render_config(cfg);
  }
  {
    auto out = open("schedule.ini");
    if (report.plan.schedule) {
      write_schedule(out, *report.plan.schedule);
    } else {
      out << "[schedule]\n"
          << "method = " << report.plan.method << "\n"
          << "eta = " << fmt(report.plan.eta) << "\n"
          << "tau = " << report.plan.params.tau << "\n"
          << "big_batch = " << report.plan.params.big_batch << "\n"
          << "small_batch = " << report.plan.params.small_batch << "\n"
          << "iterations = " << report.plan.iterations << "\n"
          << "epsilon_first = " << fmt(report.plan.plan.epsilon(1)) << "\n"
          << "predicted_samples = " << report.plan.predicted_samples << "\n";
    }
  }
}

inline void print_summary(std::ostream& os, const RunReport& report) {
  double g_sum = 0.0;
  Index g_count = 0;
  std::uint64_t total = 0;
  bool ledger_match = true;
  Index finished = 0;
  for (const auto& r : report.results) {
    if (!r.ok) {
      os << "seed " << r.seed << " failed: " << r.error << "\n";
      continue;
    }
    ++finished;
    total += r.trace.samples;
    if (!r.trace.stopped_early && r.trace.samples != report.plan.predicted_samples) ledger_match = false;
    if (std::isfinite(r.output_mapping_norm)) {
      g_sum += r.output_mapping_norm;
      ++g_count;
    }
  }
  os << "method: " << report.plan.method << "\n"
     << "seeds: " << finished << " of " << report.results.size() << " finished\n";
  if (g_count > 0) os << "mean |G(xbar)|: " << fmt(g_sum / static_cast<double>(g_count)) << "\n";
  os << "total samples: " << total << "\n"
     << "predicted samples per seed: " << report.plan.predicted_samples << "\n"
     << "ledger matches prediction: " << (ledger_match ? "yes" : "no") << "\n";
}

/// Dry run: constants and the schedule table, without running any iteration.
inline void print_validation(std::ostream& os, const RunConfig& cfg, const BuiltProblem& built,
                             const MethodPlan& plan) {
  os << "problem: " << cfg.problem.benchmark << " (" << built.description << "), m = "
     << built.problem->levels() << ", d = " << built.problem->dimension() << "\n";
  const auto levels = level_constants(*built.problem);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    os << "level " << (i + 1) << ": N = " << built.components[i] << ", ell = " << fmt(levels[i].ell)
       << ", L = " << fmt(levels[i].L) << ", sigma = " << fmt(levels[i].sigma)
       << ", delta = " << fmt(levels[i].delta) << "\n";
  }
  os << "composite: ell_F = " << fmt(plan.constants.ell_F) << ", L_F = " << fmt(plan.constants.L_F)
     << ", sigma_F^2 = " << fmt(plan.constants.sigma_F_sq) << ", delta_F^2 = " << fmt(plan.constants.delta_F_sq)
     << "\n";
  os << "method: " << plan.method << ", eta = " << fmt(plan.eta) << "\n";
  if (plan.schedule) {
    const NestedSchedule& s = *plan.schedule;
    os << "schedule mode: " << to_string(s.mode) << (s.fell_back ? " (fallback from finite-sum)" : "")
       << ", K = " << s.stages.size() << ", T = " << s.total_iterations() << "\n";
    os << "k,epsilon_k,tau_k,B,b,S,s\n";
    const std::size_t K = s.stages.size();
    for (std::size_t k = 0; k < K; ++k) {
      if (K > 12 && k == 5) {
        os << "...\n";
        k = K - 5;
      }
      const auto& st = s.stages[k];
      os << (k + 1) << ',' << fmt(st.epsilon) << ',' << st.tau << ",[" << npag::harness::detail::csv_list(st.batches.B)
         << "],[" << npag::harness::detail::csv_list(st.batches.b) << "],["
         << npag::harness::detail::csv_list(st.batches.S) << "],["
         << npag::harness::detail::csv_list(st.batches.s) << "]\n";
    }
  } else {
    os << "tau = " << plan.params.tau << ", B = " << plan.params.big_batch << ", b = " << plan.params.small_batch
       << ", T = " << plan.iterations << ", epsilon_1 = " << fmt(plan.plan.epsilon(1)) << "\n";
  }
  for (const auto& note : plan.notes) os << "note: " << note << "\n";
  os << "predicted samples per seed: " << plan.predicted_samples << "\n";
}

}  // namespace npag::harness
