#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "npag/core/types.hpp"
#include "npag/schedules/constants.hpp"
#include "npag/schedules/epsilon.hpp"

namespace npag {

// Batch sizes for one stage. B and b have m entries (Jacobian estimators), S and s have
// m - 1 entries (mapping estimators; the top level has none).
struct StageBatches {
  std::vector<Index> B, b, S, s;
};

struct NestedStage {
  double epsilon = 1.0;
  Index tau = 1;
  StageBatches batches;
};

enum class ScheduleMode { kExpectation, kFiniteSum, kPractical };

inline const char* to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kExpectation:
      return "expectation";
    case ScheduleMode::kFiniteSum:
      return "finite-sum";
    case ScheduleMode::kPractical:
      return "practical";
  }
  return "unknown";
}

struct NestedSchedule {
  ScheduleMode mode = ScheduleMode::kExpectation;
  Index levels = 1;
  std::vector<NestedStage> stages;
  CompositeConstants constants;
  double target_epsilon = 0.0;
  double theta = 1.0;
  double gap = 1.0;
  bool constant_epsilon = false;
  // Set when a finite-sum request failed its validity gate and the expectation
  // schedule was used instead.
  bool fell_back = false;
  std::vector<std::string> notes;

  Index stage_count() const { return stages.size(); }

  Index total_iterations() const {
    Index t = 0;
    for (const auto& st : stages) t += st.tau;
    return t;
  }

  EpsilonPlan epsilon_plan() const {
    std::vector<double> eps;
    std::vector<Index> len;
    for (const auto& st : stages) {
      eps.push_back(st.epsilon);
      len.push_back(st.tau);
    }
    return EpsilonPlan::stages(std::move(eps), std::move(len));
  }
};

struct ScheduleOptions {
  double theta = 1.0;
  // Stand-in for Phi(x^0) - inf Phi, which only sizes K.
  double gap = 1.0;
  bool constant_epsilon = false;
  Index max_stages = 10'000'000;
};

namespace detail {

inline void check_inputs(const CompositeConstants& c, Index m, double eps,
                         const ScheduleOptions& opt) {
  require(m >= 1, "nested schedule: m must be >= 1");
  require(c.ell_F > 0.0 && c.L_F > 0.0, "nested schedule: ell_F and L_F must be positive");
  require(eps > 0.0 && std::isfinite(eps), "nested schedule: target epsilon must be positive");
  require(opt.theta > 0.0, "nested schedule: theta must be positive");
  require(opt.gap >= 0.0, "nested schedule: gap proxy must be non-negative");
  require(opt.max_stages >= 1, "nested schedule: max_stages must be >= 1");
}

// Stage batches that keep the expectation-case MSE below e^2.
inline StageBatches expectation_batches(const CompositeConstants& c, Index m, double e) {
  const double md = static_cast<double>(m);
  const double e2 = e * e;
  StageBatches sb;
  sb.B.assign(m, ceil_count(12.0 * md * (md + 1.0) * c.sigma_F_sq / e2));
  sb.b.assign(m, ceil_count(6.0 * (md + 1.0) * c.ell_F / e));
  sb.S.assign(m - 1, ceil_count(12.0 * md * (md + 1.0) * c.delta_F_sq / e2));
  sb.s.assign(m - 1, ceil_count(6.0 * md * (md + 1.0) * c.ell_F / e));
  return sb;
}

inline Index expectation_tau(const CompositeConstants& c, Index m, double e) {
  return ceil_count(c.ell_F / (2.0 * static_cast<double>(m) * e));
}

inline void clamp_to(StageBatches& sb, const std::vector<Index>& N) {
  for (std::size_t i = 0; i < sb.B.size(); ++i) {
    sb.B[i] = std::min(sb.B[i], N[i]);
    sb.b[i] = std::min(sb.b[i], N[i]);
  }
  for (std::size_t i = 0; i < sb.S.size(); ++i) {
    sb.S[i] = std::min(sb.S[i], N[i]);
    sb.s[i] = std::min(sb.s[i], N[i]);
  }
}

}  // namespace detail

/// Expectation-case schedule: eps_k = m theta L_F / (k ell_F), tau_k = ceil(ell_F/(2 m eps_k)),
/// and per-stage batches from the MSE bound. K is the least integer with
/// 8 m L_F (gap + theta ln K) / (K ell_F) <= eps. With constant_epsilon every stage uses
/// eps and K is the least integer with 8 m L_F gap / (K ell_F) <= eps.
inline NestedSchedule nested_schedule_expectation(const CompositeConstants& c, Index m, double eps,
                                                  const ScheduleOptions& opt = {}) {
  detail::check_inputs(c, m, eps, opt);
  const double md = static_cast<double>(m);
  const double coef = 8.0 * md * c.L_F / c.ell_F;

  Index K = 0;
  if (opt.constant_epsilon) {
    K = ceil_count(coef * opt.gap / eps);
  } else {
    for (Index k = 1; k <= opt.max_stages; ++k) {
      const double kd = static_cast<double>(k);
      if (coef * (opt.gap + opt.theta * std::log(kd)) / kd <= eps) {
        K = k;
        break;
      }
    }
  }
  if (K == 0 || K > opt.max_stages) {
    throw InvalidArgument("nested_schedule_expectation: stage count exceeds max_stages");
  }

  NestedSchedule out;
  out.mode = ScheduleMode::kExpectation;
  out.levels = m;
  out.constants = c;
  out.target_epsilon = eps;
  out.theta = opt.theta;
  out.gap = opt.gap;
  out.constant_epsilon = opt.constant_epsilon;
  out.stages.reserve(K);
  for (Index k = 1; k <= K; ++k) {
    const double ek = opt.constant_epsilon
                          ? eps
                          : md * opt.theta * c.L_F / (static_cast<double>(k) * c.ell_F);
    out.stages.push_back({ek, detail::expectation_tau(c, m, ek), detail::expectation_batches(c, m, ek)});
  }
  if (eps >= std::sqrt(c.sigma_F_sq)) {
    out.notes.push_back("target epsilon is at least sigma_F: variance reduction brings no benefit");
  }
  return out;
}

/// Validity gate of the finite-sum schedule: sqrt(N_max) <= ell_F / (2 m eps).
inline bool finite_sum_gate(const CompositeConstants& c, Index m, Index n_max, double eps) {
  const double lhs = std::sqrt(static_cast<double>(n_max));
  const double rhs = c.ell_F / (2.0 * static_cast<double>(m) * eps);
  return lhs <= rhs * (1.0 + 1e-12);
}

/// Finite-sum schedule: tau = ceil(sqrt(N_max)), eps_k = (theta L_F / (k sqrt(N_max)))^(1/2),
/// full restart batches, b_i = min(ceil(6m(m+1) sqrt(N_max)), N_i) and
/// s_i = min(ceil(6m^2(m+1) sqrt(N_max)), N_i). K is the least integer with
/// [4 L_F gap + 4 sum_k tau eps_k^2] / sum_k tau eps_k <= eps. When the gate fails the
/// expectation schedule is used, clamped to N_i, and `fell_back` is set.
inline NestedSchedule nested_schedule_finite_sum(const CompositeConstants& c, Index m,
                                                 const std::vector<Index>& N, double eps,
                                                 const ScheduleOptions& opt = {}) {
  detail::check_inputs(c, m, eps, opt);
  require(N.size() == m, "nested_schedule_finite_sum: need one component count per level");
  Index n_max = 0;
  for (Index n : N) {
    require(n >= 1, "nested_schedule_finite_sum: component counts must be >= 1");
    n_max = std::max(n_max, n);
  }

  if (!finite_sum_gate(c, m, n_max, eps)) {
    NestedSchedule out = nested_schedule_expectation(c, m, eps, opt);
    for (auto& st : out.stages) detail::clamp_to(st.batches, N);
    out.fell_back = true;
    out.notes.push_back("finite-sum gate sqrt(N_max) <= ell_F/(2 m eps) failed; using the expectation schedule");
    return out;
  }

  const double md = static_cast<double>(m);
  const double root = std::sqrt(static_cast<double>(n_max));
  const Index tau = ceil_count(root);
  const double td = static_cast<double>(tau);

  Index K = 0;
  double sum_e = 0.0;
  double sum_e2 = 0.0;
  for (Index k = 1; k <= opt.max_stages; ++k) {
    const double e2 = opt.theta * c.L_F / (static_cast<double>(k) * root);
    sum_e += td * std::sqrt(e2);
    sum_e2 += td * e2;
    if ((4.0 * c.L_F * opt.gap + 4.0 * sum_e2) / sum_e <= eps) {
      K = k;
      break;
    }
  }
  if (K == 0) throw InvalidArgument("nested_schedule_finite_sum: stage count exceeds max_stages");

  StageBatches sb;
  sb.B = N;
  sb.S.assign(N.begin(), N.end() - 1);
  const Index b_raw = ceil_count(6.0 * md * (md + 1.0) * root);
  const Index s_raw = ceil_count(6.0 * md * md * (md + 1.0) * root);
  for (Index i = 0; i < m; ++i) {
    sb.b.push_back(std::min(b_raw, N[i]));
    if (i + 1 < m) sb.s.push_back(std::min(s_raw, N[i]));
  }

  NestedSchedule out;
  out.mode = ScheduleMode::kFiniteSum;
  out.levels = m;
  out.constants = c;
  out.target_epsilon = eps;
  out.theta = opt.theta;
  out.gap = opt.gap;
  out.stages.reserve(K);
  for (Index k = 1; k <= K; ++k) {
    const double ek = std::sqrt(opt.theta * c.L_F / (static_cast<double>(k) * root));
    out.stages.push_back({ek, tau, sb});
  }
  return out;
}

/// Hand-tuned schedule of the kind used in experiments: eps_k = scale / k^power, a fixed
/// epoch length, full restart batches and fixed step batches (clamped to N_i).
inline NestedSchedule nested_schedule_practical(const CompositeConstants& c, Index m,
                                                const std::vector<Index>& N, Index stages,
                                                double scale, double power, Index tau,
                                                Index step_batch, Index map_step_batch) {
  require(m >= 1 && N.size() == m, "nested_schedule_practical: need one component count per level");
  require(stages >= 1 && tau >= 1, "nested_schedule_practical: stages and tau must be >= 1");
  require(step_batch >= 1 && map_step_batch >= 1, "nested_schedule_practical: batches must be >= 1");
  const EpsilonPlan plan = EpsilonPlan::power(scale, power, tau);
  StageBatches sb;
  for (Index i = 0; i < m; ++i) {
    require(N[i] >= 1, "nested_schedule_practical: component counts must be >= 1");
    sb.B.push_back(N[i]);
    sb.b.push_back(std::min(step_batch, N[i]));
    if (i + 1 < m) {
      sb.S.push_back(N[i]);
      sb.s.push_back(std::min(map_step_batch, N[i]));
    }
  }
  NestedSchedule out;
  out.mode = ScheduleMode::kPractical;
  out.levels = m;
  out.constants = c;
  out.target_epsilon = plan.epsilon(stages);
  for (Index k = 1; k <= stages; ++k) out.stages.push_back({plan.epsilon(k), tau, sb});
  return out;
}

/// Samples charged by a full run of the schedule: restarts cost |B|, |S| and each
/// in-stage step costs two evaluations per sampled index.
inline std::uint64_t predicted_sample_count(const NestedSchedule& schedule) {
  std::uint64_t total = 0;
  for (const auto& st : schedule.stages) {
    const std::uint64_t steps = st.tau - 1;
    for (std::size_t i = 0; i < st.batches.B.size(); ++i) {
      total += st.batches.B[i] + steps * 2 * st.batches.b[i];
    }
    for (std::size_t i = 0; i < st.batches.S.size(); ++i) {
      total += st.batches.S[i] + steps * 2 * st.batches.s[i];
    }
  }
  return total;
}

// Checks the structural invariants of a schedule; throws InvalidArgument on violation.
inline void validate_schedule(const NestedSchedule& schedule, const std::vector<Index>* N = nullptr) {
  require(!schedule.stages.empty(), "schedule has no stages");
  const Index m = schedule.levels;
  for (const auto& st : schedule.stages) {
    require(st.epsilon > 0.0 && st.tau >= 1, "schedule stage has invalid epsilon or tau");
    const auto& sb = st.batches;
    require(sb.B.size() == m && sb.b.size() == m && sb.S.size() + 1 == m && sb.s.size() + 1 == m,
            "schedule stage batches do not match the level count");
    for (Index i = 0; i < m; ++i) {
      require(sb.B[i] >= 1 && sb.b[i] >= 1, "schedule batch sizes must be >= 1");
      if (N) require(sb.B[i] <= (*N)[i] && sb.b[i] <= (*N)[i], "schedule batch exceeds N_i");
      if (i + 1 < m) {
        require(sb.S[i] >= 1 && sb.s[i] >= 1, "schedule batch sizes must be >= 1");
        if (N) require(sb.S[i] <= (*N)[i] && sb.s[i] <= (*N)[i], "schedule batch exceeds N_i");
      }
    }
  }
}

}  // namespace npag
