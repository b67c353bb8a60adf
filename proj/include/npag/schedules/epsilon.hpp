#pragma once

#include <cmath>
#include <vector>

#include "npag/core/types.hpp"

namespace npag {

/// Stage-wise accuracy sequence. Stage k (1-based) has accuracy eps_k and length tau_k;
/// an estimator restart happens at the first iteration of every stage.
class EpsilonPlan {
 public:
  enum class Kind { kConstant, kPower, kStages };

  // eps_k = eps for every stage of length tau.
  static EpsilonPlan constant(double eps, Index tau) {
    require(eps > 0.0 && std::isfinite(eps), "EpsilonPlan: epsilon must be positive");
    require(tau >= 1, "EpsilonPlan: stage length must be >= 1");
    EpsilonPlan p;
    p.kind_ = Kind::kConstant;
    p.c_ = eps;
    p.tau_ = tau;
    return p;
  }

  // eps_k = c / k^a, stages of length tau.
  static EpsilonPlan power(double c, double a, Index tau) {
    require(c > 0.0 && std::isfinite(c), "EpsilonPlan: scale must be positive");
    require(a >= 0.0 && std::isfinite(a), "EpsilonPlan: exponent must be non-negative");
    require(tau >= 1, "EpsilonPlan: stage length must be >= 1");
    EpsilonPlan p;
    p.kind_ = Kind::kPower;
    p.c_ = c;
    p.a_ = a;
    p.tau_ = tau;
    return p;
  }

  // Explicit finite list of (eps_k, tau_k).
  static EpsilonPlan stages(std::vector<double> eps, std::vector<Index> lengths) {
    require(!eps.empty(), "EpsilonPlan: no stages");
    require(eps.size() == lengths.size(), "EpsilonPlan: eps and length lists differ in size");
    for (std::size_t k = 0; k < eps.size(); ++k) {
      require(eps[k] > 0.0 && std::isfinite(eps[k]), "EpsilonPlan: epsilon must be positive");
      require(lengths[k] >= 1, "EpsilonPlan: stage length must be >= 1");
    }
    EpsilonPlan p;
    p.kind_ = Kind::kStages;
    p.eps_ = std::move(eps);
    p.lengths_ = std::move(lengths);
    return p;
  }

  Kind kind() const { return kind_; }
  bool bounded() const { return kind_ == Kind::kStages; }
  Index stage_count() const { return eps_.size(); }
  double scale() const { return c_; }
  double exponent() const { return a_; }

  double epsilon(Index k) const {
    require(k >= 1, "EpsilonPlan: stages are 1-based");
    switch (kind_) {
      case Kind::kConstant:
        return c_;
      case Kind::kPower:
        return c_ / std::pow(static_cast<double>(k), a_);
      case Kind::kStages:
        require(k <= eps_.size(), "EpsilonPlan: stage beyond the explicit list");
        return eps_[k - 1];
    }
    return c_;
  }

  Index length(Index k) const {
    require(k >= 1, "EpsilonPlan: stages are 1-based");
    if (kind_ == Kind::kStages) {
      require(k <= lengths_.size(), "EpsilonPlan: stage beyond the explicit list");
      return lengths_[k - 1];
    }
    return tau_;
  }

  // Total iterations of an explicit plan; 0 for unbounded plans.
  Index total_iterations() const {
    Index t = 0;
    for (Index n : lengths_) t += n;
    return t;
  }

 private:
  Kind kind_ = Kind::kConstant;
  double c_ = 1.0;
  double a_ = 0.0;
  Index tau_ = 1;
  std::vector<double> eps_;
  std::vector<Index> lengths_;
};

// Walks (stage, within-stage counter) alongside the iteration counter.
class StageCursor {
 public:
  explicit StageCursor(const EpsilonPlan& plan) : plan_(&plan) {}

  Index stage() const { return stage_; }
  Index within() const { return within_; }
  double epsilon() const { return plan_->epsilon(stage_); }
  bool at_restart() const { return within_ == 0; }
  bool exhausted() const { return plan_->bounded() && stage_ > plan_->stage_count(); }

  void advance() {
    ++within_;
    if (within_ >= plan_->length(stage_)) {
      within_ = 0;
      ++stage_;
    }
  }

 private:
  const EpsilonPlan* plan_;
  Index stage_ = 1;
  Index within_ = 0;
};

}  // namespace npag
