#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "npag/core/random.hpp"
#include "npag/core/types.hpp"
#include "npag/estimators/minibatch.hpp"
#include "npag/problem/composition.hpp"
#include "npag/prox/prox.hpp"
#include "npag/schedules/epsilon.hpp"

namespace npag {

struct NpagStep {
  Vector next;
  Vector tentative;
  double gamma = 1.0;
  double step_length = 0.0;
  double approx_mapping_norm = 0.0;
};

/// One normalized step: x~ = prox(x - eta v), gamma = min(eta eps / |x~ - x|, 1) and
/// x_next = x + gamma (x~ - x). A zero-length tentative step uses gamma = 1.
inline NpagStep npag_step(const Regularizer& psi, const Vector& x, const Vector& v, double eta,
                          double eps) {
  require(eps > 0.0, "npag_step: epsilon must be positive");
  const ProxResult pr = gradient_mapping(psi, x, eta, v);
  NpagStep out;
  out.tentative = pr.point;
  out.approx_mapping_norm = pr.mapping_norm;
  const Vector dir = pr.point - x;
  const double dist = dir.norm();
  const double cap = eta * eps;
  if (dist <= cap) {
    out.gamma = 1.0;
    out.next = pr.point;
  } else {
    out.gamma = cap / dist;
    out.next = x + out.gamma * dir;
  }
  out.step_length = (out.next - x).norm();
  return out;
}

struct NpagConfig {
  double eta = 1.0;
  EpsilonPlan epsilon = EpsilonPlan::constant(1.0, 1);
  // Iteration count T. Zero means "run every stage of a bounded plan".
  Index iterations = 0;
  std::uint64_t seed = 0;
  // Evaluate G(x^t) and Phi(x^t) every this many iterations; 0 disables diagnostics.
  Index diagnostic_cadence = 0;
  // Stop once a diagnostic |G(x^t)| is at most this value; 0 disables.
  double stop_tolerance = 0.0;
  Vector x0;
};

struct IterationRecord {
  Index t = 0;
  Index stage = 1;
  Index within = 0;
  double epsilon = 0.0;
  double approx_mapping_norm = 0.0;
  double gamma = 1.0;
  double step_length = 0.0;
  std::uint64_t samples = 0;
  std::optional<double> mapping_norm;
  std::optional<double> objective;
  std::uint64_t diagnostic_samples = 0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Vector output;
  Index output_index = 0;
  Vector final_point;
  std::uint64_t samples = 0;
  std::uint64_t diagnostic_samples = 0;
  bool stopped_early = false;
};

// What a gradient source sees at iteration t.
struct IterationContext {
  std::uint64_t seed = 0;
  Index t = 0;
  Index stage = 1;
  Index within = 0;
  double epsilon = 0.0;
  bool restart() const { return within == 0; }
};

template <class S>
concept GradientSource = requires(S s, const IterationContext& ctx, const Vector& x, SampleLedger& l) {
  { s.estimate(ctx, x, l) } -> std::convertible_to<Vector>;
};

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Streaming draw of one iterate with probability proportional to its weight. Item t
/// replaces the current pick with probability w_t / (w_0 + ... + w_t), which leaves
/// every item selected with probability w_t / sum w.
class WeightedReservoir {
 public:
  explicit WeightedReservoir(std::uint64_t seed) : seed_(seed) {}

  void offer(Index t, double weight, const Vector& x) {
    total_ += weight;
    Rng rng = substream(seed_, 0, t, 0, DrawRole::kOutput);
    const double u = unit_uniform(rng);
    if (!has_ || u * total_ < weight) {
      pick_ = x;
      index_ = t;
      has_ = true;
    }
  }

  bool has_pick() const { return has_; }
  const Vector& pick() const { return pick_; }
  Index index() const { return index_; }

 private:
  std::uint64_t seed_;
  double total_ = 0.0;
  bool has_ = false;
  Vector pick_;
  Index index_ = 0;
};

inline std::uint64_t objective_cost(const CompositionProblem& problem) {
  std::uint64_t n = 0;
  for (Index i = 0; i < problem.levels(); ++i) n += problem.level(i).oracle->component_count();
  return n;
}

/// Algorithm loop of NPAG with an arbitrary gradient source. Records each iteration,
/// enforces the step cap and returns the weighted-sampled output point.
template <GradientSource Source>
RunTrace run_npag(const CompositionProblem& problem, Source& source, const NpagConfig& config) {
  require(config.eta > 0.0, "run_npag: eta must be positive");
  const Index d = problem.dimension();
  Vector x = config.x0.size() == 0 ? Vector::Zero(static_cast<Eigen::Index>(d)) : config.x0;
  require_dims(static_cast<Index>(x.size()) == d, "run_npag: x0 has the wrong dimension");
  require(x.allFinite(), "run_npag: x0 must be finite");

  Index T = config.iterations;
  if (T == 0) {
    T = config.epsilon.total_iterations();
    require(T >= 1, "run_npag: iteration count required for an unbounded epsilon plan");
  }
  if (config.epsilon.bounded()) {
    require(T <= config.epsilon.total_iterations(), "run_npag: more iterations than the plan covers");
  }

  RunTrace trace;
  trace.records.reserve(T);
  SampleLedger ledger;
  StageCursor cursor(config.epsilon);
  WeightedReservoir reservoir(config.seed);

  for (Index t = 0; t < T; ++t) {
    IterationContext ctx{config.seed, t, cursor.stage(), cursor.within(), cursor.epsilon()};

    IterationRecord rec;
    rec.t = t;
    rec.stage = ctx.stage;
    rec.within = ctx.within;
    rec.epsilon = ctx.epsilon;

    bool stop = false;
    if (config.diagnostic_cadence > 0 && t % config.diagnostic_cadence == 0) {
      const ProxResult g = exact_gradient_mapping(problem, x, config.eta);
      rec.mapping_norm = g.mapping_norm;
      rec.objective = evaluate_objective(problem, x);
      trace.diagnostic_samples += problem.exact_gradient_cost() + objective_cost(problem);
      stop = config.stop_tolerance > 0.0 && g.mapping_norm <= config.stop_tolerance;
    }

    const Vector v = source.estimate(ctx, x, ledger);
    require_dims(static_cast<Index>(v.size()) == d, "run_npag: estimate has the wrong dimension");
    if (!v.allFinite()) throw DivergenceError("run_npag: non-finite gradient estimate", t);

    const NpagStep step = npag_step(problem.regularizer(), x, v, config.eta, ctx.epsilon);
    if (!step.next.allFinite()) throw DivergenceError("run_npag: non-finite iterate", t);

    rec.approx_mapping_norm = step.approx_mapping_norm;
    rec.gamma = step.gamma;
    rec.step_length = step.step_length;
    rec.samples = ledger.samples;
    rec.diagnostic_samples = trace.diagnostic_samples;
    trace.records.push_back(rec);

    reservoir.offer(t, ctx.epsilon, x);
    x = step.next;
    cursor.advance();
    if (stop) {
      trace.stopped_early = true;
      break;
    }
  }

  trace.output = reservoir.pick();
  trace.output_index = reservoir.index();
  trace.final_point = x;
  trace.samples = ledger.samples;
  return trace;
}

}  // namespace npag
