#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "npag/npag.hpp"

namespace npag::testing {

inline Vector random_vector(Index d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

inline Matrix random_matrix(Index r, Index c, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  }
  return a;
}

// Scalar level f_j(x) = 0.5 |x - c_j|^2 with gradient x - c_j.
class QuadraticLevel final : public LevelOracle {
 public:
  explicit QuadraticLevel(std::vector<Vector> centers, SamplerKind sampler = SamplerKind::kFinite)
      : c_(std::move(centers)), sampler_(sampler) {}
  Index input_dim() const override { return static_cast<Index>(c_.front().size()); }
  Index output_dim() const override { return 1; }
  Index component_count() const override { return c_.size(); }
  SamplerKind sampler() const override { return sampler_; }
  Vector value(Index j, const Vector& x) const override {
    Vector out(1);
    out[0] = 0.5 * (x - c_[j]).squaredNorm();
    return out;
  }
  Matrix jacobian(Index j, const Vector& x) const override { return (x - c_[j]).transpose(); }

 private:
  std::vector<Vector> c_;
  SamplerKind sampler_;
};

// Affine level f_j(y) = A_j y + c_j.
class AffineLevel final : public LevelOracle {
 public:
  AffineLevel(std::vector<Matrix> A, std::vector<Vector> c) : A_(std::move(A)), c_(std::move(c)) {}
  Index input_dim() const override { return static_cast<Index>(A_.front().cols()); }
  Index output_dim() const override { return static_cast<Index>(A_.front().rows()); }
  Index component_count() const override { return A_.size(); }
  Vector value(Index j, const Vector& y) const override { return A_[j] * y + c_[j]; }
  Matrix jacobian(Index j, const Vector&) const override { return A_[j]; }

 private:
  std::vector<Matrix> A_;
  std::vector<Vector> c_;
};

// Scalar level f(y) = 0.5 |y|^2 with a single component.
class HalfSquaredNorm final : public LevelOracle {
 public:
  explicit HalfSquaredNorm(Index d) : d_(d) {}
  Index input_dim() const override { return d_; }
  Index output_dim() const override { return 1; }
  Index component_count() const override { return 1; }
  Vector value(Index, const Vector& y) const override {
    Vector out(1);
    out[0] = 0.5 * y.squaredNorm();
    return out;
  }
  Matrix jacobian(Index, const Vector& y) const override { return y.transpose(); }

 private:
  Index d_;
};

inline std::shared_ptr<QuadraticLevel> quadratic_level(Index n, Index d, Rng& rng,
                                                       SamplerKind sampler = SamplerKind::kFinite) {
  std::vector<Vector> c;
  for (Index j = 0; j < n; ++j) c.push_back(random_vector(d, rng));
  return std::make_shared<QuadraticLevel>(std::move(c), sampler);
}

// One-level finite sum of 0.5 |x - c_j|^2 (L = ell-on-unit-ball irrelevant; L = 1).
inline CompositionProblem quadratic_problem(Index n, Index d, std::uint64_t seed,
                                            std::shared_ptr<const Regularizer> psi = zero_regularizer()) {
  Rng rng(seed);
  Smoothness s;
  s.ell = 1.0;
  s.L = 1.0;
  s.sigma = 1.0;
  return CompositionProblem({LevelSpec{quadratic_level(n, d, rng), s}}, std::move(psi));
}

/// Central differences of g at x with step h.
inline Vector finite_difference(const std::function<double(const Vector&)>& g, const Vector& x,
                                double h = 1e-5) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out[i] = (g(xp) - g(xm)) / (2.0 * h);
  }
  return out;
}

inline double relative_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Minimizer of beta |y| + (y - x)^2 / (2 eta) over a grid of spacing `step`, refined
/// twice around the best point.
inline double grid_prox_1d(double x, double eta, double beta, double step = 1e-3) {
  auto obj = [&](double y) { return beta * std::abs(y) + (y - x) * (y - x) / (2.0 * eta); };
  double lo = -std::abs(x) - 1.0, hi = std::abs(x) + 1.0;
  double best = 0.0;
  for (int round = 0; round < 3; ++round) {
    double best_val = obj(lo);
    best = lo;
    for (double y = lo; y <= hi; y += step) {
      const double v = obj(y);
      if (v < best_val) {
        best_val = v;
        best = y;
      }
    }
    if (obj(0.0) <= best_val) best = 0.0;
    lo = best - 2 * step;
    hi = best + 2 * step;
    step /= 1000.0;
  }
  return best;
}

}  // namespace npag::testing

namespace npag::testing {

// Scalar synthetic problem whose gradient family drives the estimator MSE checks.
inline CompositionProblem mse_problem(Index n, Index d, std::uint64_t seed,
                                      SamplerKind sampler = SamplerKind::kStream) {
  SyntheticOptions opt;
  opt.dims = {d, 1};
  opt.components = {n};
  opt.hidden = 4;
  opt.mix_noise = 1.0;
  opt.sampler = sampler;
  return synthetic_composition(opt, seed);
}

// Path x^0, ..., x^{steps} with every step of length exactly delta.
inline std::vector<Vector> capped_path(const Vector& x0, Index steps, double delta, Rng& rng) {
  std::vector<Vector> path{x0};
  for (Index t = 0; t < steps; ++t) {
    Vector u = random_vector(static_cast<Index>(x0.size()), rng);
    path.push_back(path.back() + delta * u / u.norm());
  }
  return path;
}

// Largest exact variance mean_j |phi_j(x) - phibar(x)|_F^2 over the given points.
inline double max_variance(const MappingFamily& fam, const std::vector<Vector>& points) {
  double best = 0.0;
  for (const Vector& x : points) {
    const Matrix mean = exact_average(fam, x);
    double v = 0.0;
    for (Index j = 0; j < fam.size(); ++j) v += (fam.evaluate(j, x) - mean).squaredNorm();
    best = std::max(best, v / static_cast<double>(fam.size()));
  }
  return best;
}

}  // namespace npag::testing
