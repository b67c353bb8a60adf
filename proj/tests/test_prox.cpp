#include <gtest/gtest.h>

#include "support.hpp"

namespace npag {
namespace {

TEST(ProxL1, SoftThresholdExample) {
  Vector x(2);
  x << 2.0, -0.3;
  const Vector y = prox_l1(x, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(y[0], 1.5);
  EXPECT_DOUBLE_EQ(y[1], 0.0);
}

TEST(ProxL1, ZeroWeightIsIdentity) {
  Rng rng(1);
  const Vector x = testing::random_vector(9, rng);
  EXPECT_EQ(prox_l1(x, 0.7, 0.0), x);
}

TEST(ProxL1, TieMapsToZero) {
  Vector x(2);
  x << 0.5, -0.5;
  const Vector y = prox_l1(x, 1.0, 0.5);
  EXPECT_EQ(y[0], 0.0);
  EXPECT_EQ(y[1], 0.0);
}

TEST(ProxL1, RejectsNonPositiveStep) {
  EXPECT_THROW(prox_l1(Vector::Ones(2), 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(prox_l1(Vector::Ones(2), -1.0, 1.0), InvalidArgument);
  EXPECT_THROW(prox_l1(Vector::Ones(2), 1.0, -0.1), InvalidArgument);
}

TEST(ProxL1, MatchesGridSearchOracle) {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector x = testing::random_vector(4, rng, 2.0);
    const double eta = 0.3 + 0.1 * rep;
    const double beta = 0.05 * rep;
    const Vector y = prox_l1(x, eta, beta);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(y[i], testing::grid_prox_1d(x[i], eta, beta), 1e-6);
    }
  }
}

TEST(ProxL1, OptimalityCondition) {
  Rng rng(3);
  const double eta = 0.8, beta = 0.6;
  for (int rep = 0; rep < 200; ++rep) {
    const Vector x = testing::random_vector(6, rng);
    const Vector y = prox_l1(x, eta, beta);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      // y - x + eta beta g = 0 with g in the subdifferential of |.| at y.
      const double g = (x[i] - y[i]) / (eta * beta);
      if (y[i] != 0.0) {
        EXPECT_NEAR(g, y[i] > 0 ? 1.0 : -1.0, 1e-12);
      } else {
        EXPECT_LE(std::abs(g), 1.0 + 1e-12);
      }
    }
  }
}

TEST(ProxL1, Nonexpansive) {
  Rng rng(4);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vector x = testing::random_vector(5, rng);
    const Vector y = testing::random_vector(5, rng);
    EXPECT_LE((prox_l1(x, 0.5, 1.0) - prox_l1(y, 0.5, 1.0)).norm(), (x - y).norm() + 1e-15);
  }
}

TEST(GradientMapping, ZeroRegularizerReturnsV) {
  Rng rng(5);
  const Vector x = testing::random_vector(4, rng);
  const Vector v = testing::random_vector(4, rng);
  for (double eta : {0.1, 1.0, 3.0}) {
    const ProxResult r = gradient_mapping(ZeroRegularizer{}, x, eta, v);
    EXPECT_LE((r.mapping - v).norm(), 1e-12 * (1.0 + v.norm()) / eta);
  }
}

TEST(GradientMapping, FixedPointGivesZero) {
  // Phi = 0.5 (x - 3)^2 + |x|: the minimizer x = 2 satisfies x = prox(x - eta F'(x)).
  auto problem = CompositionProblem(
      {LevelSpec{std::make_shared<testing::QuadraticLevel>(std::vector<Vector>{Vector::Constant(1, 3.0)}), {}}},
      l1_regularizer(1.0));
  const Vector x = Vector::Constant(1, 2.0);
  const ProxResult r = exact_gradient_mapping(problem, x, 0.5);
  EXPECT_EQ(r.mapping_norm, 0.0);
}

TEST(GradientMapping, L1MatchesGridOracle) {
  Rng rng(6);
  const L1Regularizer psi(0.4);
  const double eta = 0.7;
  const Vector x = testing::random_vector(5, rng);
  const Vector v = testing::random_vector(5, rng);
  const ProxResult r = gradient_mapping(psi, x, eta, v);
  const Vector u = x - eta * v;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double p = testing::grid_prox_1d(u[i], eta, 0.4);
    EXPECT_NEAR(r.point[i], p, 1e-6);
    EXPECT_NEAR(r.mapping[i], (x[i] - p) / eta, 1e-6 / eta);
  }
  EXPECT_DOUBLE_EQ(r.mapping_norm, r.mapping.norm());
}

TEST(GradientMapping, DimensionMismatch) {
  EXPECT_THROW(gradient_mapping(ZeroRegularizer{}, Vector::Zero(3), 1.0, Vector::Zero(2)), DimensionMismatch);
}

TEST(GradientMapping, ApproximationBound) {
  // |G(x) - G~(x)| <= |F'(x) - v| by nonexpansiveness of the prox.
  Rng rng(7);
  const auto problem = testing::quadratic_problem(20, 6, 8, l1_regularizer(0.3));
  for (int rep = 0; rep < 200; ++rep) {
    const Vector x = testing::random_vector(6, rng);
    const Vector g = full_gradient(problem, x);
    const Vector v = g + testing::random_vector(6, rng, 0.5);
    const double eta = 0.25 + 0.01 * rep;
    const ProxResult exact = gradient_mapping(problem, x, eta, g);
    const ProxResult approx = gradient_mapping(problem, x, eta, v);
    EXPECT_LE((exact.mapping - approx.mapping).norm(), (g - v).norm() + 1e-12);
  }
}

}  // namespace
}  // namespace npag
