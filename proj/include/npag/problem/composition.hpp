#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "npag/core/types.hpp"
#include "npag/nested/chain_product.hpp"
#include "npag/problem/mapping_family.hpp"
#include "npag/problem/regularizer.hpp"

namespace npag {

/// Component oracle for one composition level: f_{i,j} : R^{d_{i-1}} -> R^{d_i} and its
/// Jacobian. Must be pure and safe for concurrent calls.
class LevelOracle {
 public:
  virtual ~LevelOracle() = default;

  virtual Index input_dim() const = 0;
  virtual Index output_dim() const = 0;
  virtual Index component_count() const = 0;
  virtual SamplerKind sampler() const { return SamplerKind::kFinite; }
  virtual bool has_exact_average() const { return true; }

  virtual Vector value(Index j, const Vector& y) const = 0;
  virtual Matrix jacobian(Index j, const Vector& y) const = 0;

  // Sparse-data levels override these to avoid materializing dense rows.
  virtual void add_value(Index j, const Vector& y, double weight, Matrix& out) const {
    out += weight * value(j, y);
  }
  virtual void add_jacobian(Index j, const Vector& y, double weight, Matrix& out) const {
    out += weight * jacobian(j, y);
  }
};

// User-supplied smoothness metadata; never estimated by the library.
struct Smoothness {
  double ell = 1.0;    // mapping Lipschitz constant
  double L = 1.0;      // Jacobian Lipschitz constant
  double sigma = 0.0;  // Jacobian variance bound
  double delta = 0.0;  // mapping variance bound (unused at the top level)
};

struct LevelSpec {
  std::shared_ptr<const LevelOracle> oracle;
  Smoothness smoothness;
};

class LevelValueFamily final : public MappingFamily {
 public:
  explicit LevelValueFamily(std::shared_ptr<const LevelOracle> oracle) : oracle_(std::move(oracle)) {}
  Index rows() const override { return oracle_->output_dim(); }
  Index cols() const override { return 1; }
  Index point_dim() const override { return oracle_->input_dim(); }
  Index size() const override { return oracle_->component_count(); }
  SamplerKind sampler() const override { return oracle_->sampler(); }
  bool has_exact_average() const override { return oracle_->has_exact_average(); }
  void accumulate(Index j, const Vector& x, double weight, Matrix& out) const override {
    oracle_->add_value(j, x, weight, out);
  }

 private:
  std::shared_ptr<const LevelOracle> oracle_;
};

class LevelJacobianFamily final : public MappingFamily {
 public:
  explicit LevelJacobianFamily(std::shared_ptr<const LevelOracle> oracle)
      : oracle_(std::move(oracle)) {}
  Index rows() const override { return oracle_->output_dim(); }
  Index cols() const override { return oracle_->input_dim(); }
  Index point_dim() const override { return oracle_->input_dim(); }
  Index size() const override { return oracle_->component_count(); }
  SamplerKind sampler() const override { return oracle_->sampler(); }
  bool has_exact_average() const override { return oracle_->has_exact_average(); }
  void accumulate(Index j, const Vector& x, double weight, Matrix& out) const override {
    oracle_->add_jacobian(j, x, weight, out);
  }

 private:
  std::shared_ptr<const LevelOracle> oracle_;
};

/// F = f_m o ... o f_1 plus a regularizer Psi. Levels are stored in composition order
/// (index 0 is f_1, which acts on the decision variable).
class CompositionProblem {
 public:
  CompositionProblem(std::vector<LevelSpec> levels, std::shared_ptr<const Regularizer> regularizer)
      : levels_(std::move(levels)), regularizer_(std::move(regularizer)) {
    if (levels_.empty()) throw InvalidArgument("CompositionProblem: need at least one level");
    if (!regularizer_) regularizer_ = zero_regularizer();
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      const LevelSpec& lv = levels_[i];
      if (!lv.oracle) throw InvalidArgument("CompositionProblem: null oracle at level " + std::to_string(i + 1));
      const Smoothness& s = lv.smoothness;
      require(s.ell > 0.0 && s.L > 0.0, "CompositionProblem: ell and L must be positive at level " + std::to_string(i + 1));
      require(s.sigma >= 0.0 && s.delta >= 0.0, "CompositionProblem: variance bounds must be non-negative");
      require(lv.oracle->component_count() >= 1, "CompositionProblem: empty component set");
      if (i > 0) {
        require_dims(levels_[i - 1].oracle->output_dim() == lv.oracle->input_dim(),
                     "CompositionProblem: output dim of level " + std::to_string(i) +
                         " does not match input dim of level " + std::to_string(i + 1));
      }
      values_.push_back(std::make_shared<LevelValueFamily>(lv.oracle));
      jacobians_.push_back(std::make_shared<LevelJacobianFamily>(lv.oracle));
    }
    require_dims(levels_.back().oracle->output_dim() == 1,
                 "CompositionProblem: top level must be scalar valued");
  }

  Index levels() const { return levels_.size(); }
  Index dimension() const { return levels_.front().oracle->input_dim(); }
  const LevelSpec& level(Index i) const { return levels_.at(i); }
  const std::vector<LevelSpec>& level_specs() const { return levels_; }
  const Regularizer& regularizer() const { return *regularizer_; }
  std::shared_ptr<const Regularizer> regularizer_ptr() const { return regularizer_; }

  // Value family of level i (0-based) with p x r = d_i x 1.
  const MappingFamily& value_family(Index i) const { return *values_.at(i); }
  // Jacobian family of level i (0-based) with p x r = d_i x d_{i-1}.
  const MappingFamily& jacobian_family(Index i) const { return *jacobians_.at(i); }

  bool has_exact_oracles() const {
    for (const auto& lv : levels_) {
      if (!lv.oracle->has_exact_average()) return false;
    }
    return true;
  }

  // Component evaluations performed by one exact pass (values below the top, all Jacobians).
  std::uint64_t exact_gradient_cost() const {
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
      n += levels_[i].oracle->component_count();
      if (i + 1 < levels_.size()) n += levels_[i].oracle->component_count();
    }
    return n;
  }

 private:
  std::vector<LevelSpec> levels_;
  std::shared_ptr<const Regularizer> regularizer_;
  std::vector<std::shared_ptr<const MappingFamily>> values_;
  std::vector<std::shared_ptr<const MappingFamily>> jacobians_;
};

namespace detail {
inline void require_exact(const CompositionProblem& problem, const char* what) {
  if (!problem.has_exact_oracles()) {
    throw UnavailableOracle(std::string(what) + ": a level has no exact average");
  }
}
}  // namespace detail

/// Exact F'(x) via the chain rule with full per-level averages.
inline Vector full_gradient(const CompositionProblem& problem, const Vector& x) {
  detail::require_exact(problem, "full_gradient");
  require_dims(static_cast<Index>(x.size()) == problem.dimension(), "full_gradient: dimension mismatch");
  const Index m = problem.levels();
  std::vector<Matrix> z;
  z.reserve(m);
  Vector y = x;
  for (Index i = 0; i < m; ++i) {
    z.push_back(exact_average(problem.jacobian_family(i), y));
    if (i + 1 < m) y = exact_average(problem.value_family(i), y).col(0);
  }
  return chain_product(z);
}

/// Smooth part F(x) by nested exact averages.
inline double evaluate_smooth(const CompositionProblem& problem, const Vector& x) {
  detail::require_exact(problem, "evaluate_smooth");
  require_dims(static_cast<Index>(x.size()) == problem.dimension(), "evaluate_smooth: dimension mismatch");
  Vector y = x;
  for (Index i = 0; i < problem.levels(); ++i) y = exact_average(problem.value_family(i), y).col(0);
  return y[0];
}

/// Phi(x) = F(x) + Psi(x).
inline double evaluate_objective(const CompositionProblem& problem, const Vector& x) {
  return evaluate_smooth(problem, x) + problem.regularizer().value(x);
}

}  // namespace npag
