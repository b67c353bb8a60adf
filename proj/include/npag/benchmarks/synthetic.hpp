#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "npag/core/random.hpp"
#include "npag/problem/composition.hpp"

namespace npag {

inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

/// f_j(y) = M y + c_j + D_j tanh(W y), with Jacobian M + D_j diag(1 - tanh^2(W y)) W.
/// M and W are shared by all components; c_j and D_j vary.
class TanhAffineLevel final : public LevelOracle {
 public:
  TanhAffineLevel(Matrix M, Matrix W, std::vector<Vector> c, std::vector<Matrix> D,
                  SamplerKind sampler = SamplerKind::kFinite)
      : M_(std::move(M)), W_(std::move(W)), c_(std::move(c)), D_(std::move(D)), sampler_(sampler) {
    require(!c_.empty() && c_.size() == D_.size(), "TanhAffineLevel: need matching c_j and D_j");
    require_dims(W_.cols() == M_.cols(), "TanhAffineLevel: M and W differ in input dimension");
    for (std::size_t j = 0; j < c_.size(); ++j) {
      require_dims(c_[j].size() == M_.rows() && D_[j].rows() == M_.rows() && D_[j].cols() == W_.rows(),
                   "TanhAffineLevel: component shapes do not match");
    }
  }

  Index input_dim() const override { return static_cast<Index>(M_.cols()); }
  Index output_dim() const override { return static_cast<Index>(M_.rows()); }
  Index component_count() const override { return c_.size(); }
  SamplerKind sampler() const override { return sampler_; }

  Vector value(Index j, const Vector& y) const override {
    const Vector h = (W_ * y).array().tanh().matrix();
    return M_ * y + c_[j] + D_[j] * h;
  }

  Matrix jacobian(Index j, const Vector& y) const override {
    const Vector h = (W_ * y).array().tanh().matrix();
    const Vector dh = (1.0 - h.array().square()).matrix();
    return M_ + D_[j] * dh.asDiagonal() * W_;
  }

  const Matrix& M() const { return M_; }
  const Matrix& W() const { return W_; }
  const Vector& c(Index j) const { return c_.at(j); }
  const Matrix& D(Index j) const { return D_.at(j); }

  /// ell = max_j (|M| + |D_j| |W|), L = max_j |D_j| |W|^2 4/(3 sqrt 3) (spectral norms,
  /// 4/(3 sqrt 3) bounds |tanh''|), sigma^2 = mean_j |D_j - Dbar|_F^2 |W|^2 and
  /// delta^2 = 2 mean_j |c_j - cbar|^2 + 2 h mean_j |D_j - Dbar|_F^2.
  Smoothness constants() const {
    const double nM = spectral_norm(M_);
    const double nW = spectral_norm(W_);
    const double n = static_cast<double>(c_.size());
    Vector cbar = Vector::Zero(M_.rows());
    Matrix dbar = Matrix::Zero(D_.front().rows(), D_.front().cols());
    for (std::size_t j = 0; j < c_.size(); ++j) {
      cbar += c_[j];
      dbar += D_[j];
    }
    cbar /= n;
    dbar /= n;
    double ell = 0.0, L = 0.0, var_d = 0.0, var_c = 0.0;
    const double tanh2 = 4.0 / (3.0 * std::sqrt(3.0));
    for (std::size_t j = 0; j < c_.size(); ++j) {
      const double nD = spectral_norm(D_[j]);
      ell = std::max(ell, nM + nD * nW);
      L = std::max(L, nD * nW * nW * tanh2);
      var_d += (D_[j] - dbar).squaredNorm();
      var_c += (c_[j] - cbar).squaredNorm();
    }
    var_d /= n;
    var_c /= n;
    Smoothness s;
    s.ell = std::max(ell, 1e-12);
    s.L = std::max(L, 1e-12);
    s.sigma = std::sqrt(var_d) * nW;
    s.delta = std::sqrt(2.0 * var_c + 2.0 * static_cast<double>(W_.rows()) * var_d);
    return s;
  }

 private:
  Matrix M_, W_;
  std::vector<Vector> c_;
  std::vector<Matrix> D_;
  SamplerKind sampler_;
};

struct SyntheticOptions {
  // d_0, d_1, ..., d_m; d_m must be 1.
  std::vector<Index> dims{5, 3, 1};
  // Components per level; a single entry applies to every level.
  std::vector<Index> components{20};
  Index hidden = 3;
  double shared_scale = 0.6;
  double mix_scale = 0.5;
  // Spread of c_j and D_j around their level means.
  double offset_noise = 0.3;
  double mix_noise = 0.3;
  // D_j = 0 everywhere: every level is affine.
  bool affine_only = false;
  SamplerKind sampler = SamplerKind::kFinite;
  std::shared_ptr<const Regularizer> regularizer = zero_regularizer();
};

/// Random m-level composition of tanh-affine levels with exact constants recorded in
/// each LevelSpec. All draws come from `seed`.
inline CompositionProblem synthetic_composition(const SyntheticOptions& opt, std::uint64_t seed) {
  const Index m = opt.dims.size() >= 2 ? opt.dims.size() - 1 : 0;
  require(m >= 1, "synthetic_composition: need at least one level");
  require(opt.dims.back() == 1, "synthetic_composition: top level must be scalar");
  require(opt.components.size() == 1 || opt.components.size() == m,
          "synthetic_composition: components must have one entry or one per level");
  require(opt.hidden >= 1, "synthetic_composition: hidden width must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Eigen::Index r, Eigen::Index c, double scale) {
    Matrix a(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) a(i, j) = scale * normal(rng);
    }
    return a;
  };

  std::vector<LevelSpec> levels;
  for (Index i = 0; i < m; ++i) {
    require(opt.dims[i] >= 1, "synthetic_composition: dimensions must be >= 1");
    const auto p = static_cast<Eigen::Index>(opt.dims[i]);
    const auto k = static_cast<Eigen::Index>(opt.dims[i + 1]);
    const auto h = static_cast<Eigen::Index>(opt.hidden);
    const Index n = opt.components.size() == 1 ? opt.components[0] : opt.components[i];
    require(n >= 1, "synthetic_composition: component counts must be >= 1");
    const double sp = 1.0 / std::sqrt(static_cast<double>(p));
    Matrix M = gaussian(k, p, opt.shared_scale * sp);
    Matrix W = gaussian(h, p, sp);
    const Vector cbar = gaussian(k, 1, 1.0).col(0);
    const Matrix dbar = gaussian(k, h, opt.mix_scale / std::sqrt(static_cast<double>(h)));
    std::vector<Vector> c;
    std::vector<Matrix> D;
    for (Index j = 0; j < n; ++j) {
      c.push_back(cbar + gaussian(k, 1, opt.offset_noise).col(0));
      if (opt.affine_only) {
        D.push_back(Matrix::Zero(k, h));
      } else {
        D.push_back(dbar + gaussian(k, h, opt.mix_noise / std::sqrt(static_cast<double>(h))));
      }
    }
    auto level = std::make_shared<TanhAffineLevel>(std::move(M), std::move(W), std::move(c),
                                                   std::move(D), opt.sampler);
    const Smoothness s = level->constants();
    levels.push_back({std::move(level), s});
  }
  return CompositionProblem(std::move(levels), opt.regularizer);
}

}  // namespace npag
