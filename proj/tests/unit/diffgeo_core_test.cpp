#include "cgconf/charts.hpp"
#include "cgconf/manifold.hpp"
#include "cgconf/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cgconf;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

/// λ(x) = e^{2x₁} on the plane, with its differential.
ScalarField exp_field() {
  ScalarField f;
  f.eval = [](const Point& x) { return std::exp(2.0 * x(0)); };
  f.gradient_oracle = [](const Point& x) { return Vec(2.0 * std::exp(2.0 * x(0)) * Vec::Unit(x.size(), 0)); };
  return f;
}

}  // namespace

TEST(MetricAt, FlatPlaneIsIdentity) {
  const ManifoldModel R2 = euclidean(2);
  EXPECT_EQ(metric_at(R2, v2(3.0, -7.0)), Mat::Identity(2, 2));
}

TEST(MetricAt, StereographicSphere) {
  const ManifoldModel S2 = stereo_chart(2, 1.0);
  EXPECT_EQ(metric_at(S2, v2(0, 0)), 4.0 * Mat::Identity(2, 2));
  EXPECT_EQ(metric_at(S2, v2(1, 0)), Mat::Identity(2, 2));
}

TEST(MetricAt, OutsideDomainThrows) {
  EXPECT_THROW(metric_at(hemisphere_chart(), v2(1.0, 0.1)), DomainError);
}

TEST(MetricAt, EmbeddingPullbackMatches) {
  for (const ManifoldModel& M : builtin_charts()) {
    if (!M.embedding) continue;
    for (int i = 0; i < 10; ++i) {
      auto rng = stream_rng(3, i);
      const Point x = uniform_in_ball(rng, M.dim, 0.9);
      const Mat J = jacobian(*M.embedding, x, {});
      EXPECT_LT((J.transpose() * J - metric_at(M, x)).cwiseAbs().maxCoeff(), 1e-12) << M.name;
    }
  }
}

TEST(Christoffel, FlatPlaneVanishes) {
  const Christoffel G = christoffel_fd(euclidean(2), v2(0.3, 0.4));
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(G(k, i, j), 0.0, 1e-12);
}

TEST(Christoffel, StereographicAtUnitPoint) {
  const Christoffel G = christoffel_at(stereo_chart(2, 1.0), v2(1, 0));
  EXPECT_DOUBLE_EQ(G(0, 0, 0), -1.0);
  EXPECT_DOUBLE_EQ(G(1, 0, 1), -1.0);
  EXPECT_DOUBLE_EQ(G(0, 1, 1), 1.0);
}

TEST(Christoffel, FiniteDifferencesMatchOracle) {
  const ManifoldModel S2 = stereo_chart(2, 1.0);
  for (int i = 0; i < 20; ++i) {
    auto rng = stream_rng(5, i);
    const Point x = uniform_in_ball(rng, 2, 2.0);
    EXPECT_LT(christoffel_fd(S2, x).max_abs_diff(christoffel_at(S2, x)), 1e-6);
  }
}

TEST(Christoffel, SymmetricInLowerIndices) {
  const ManifoldModel S4 = stereo_chart(4, 0.7);
  auto rng = stream_rng(6, 0);
  const Christoffel G = christoffel_fd(S4, uniform_in_ball(rng, 4, 1.0));
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_EQ(G(k, i, j), G(k, j, i));
}

TEST(Christoffel, SingularMetricIsRejected) {
  ManifoldModel M = euclidean(2);
  M.metric = [](const Point&) { return Mat((Mat(2, 2) << 1.0, 0.0, 0.0, 1e-14).finished()); };
  M.christoffel_oracle = nullptr;
  EXPECT_THROW(christoffel_at(M, v2(0, 0)), ConditioningError);
}

TEST(GradScalar, CoordinateFunctionOnSphere) {
  ScalarField t1;
  t1.eval = [](const Point& x) { return x(0); };
  const ManifoldModel S2 = stereo_chart(2, 1.0);
  const Point t = v2(0.3, -0.5);
  const double f = std::pow(1.0 + t.squaredNorm(), 2) / 4.0;
  const Vec g = grad_scalar(S2, t1, t);
  EXPECT_NEAR(g(0), f, 1e-9);
  EXPECT_NEAR(g(1), 0.0, 1e-9);
  EXPECT_EQ(grad_scalar(euclidean(2), t1, t), v2(1, 0));
}

TEST(SectionalCurvature, RoundSpheres) {
  const ManifoldModel S2 = stereo_chart(2, 1.0);
  const ManifoldModel S4 = stereo_chart(4, veronese_radius());
  const DiffConfig fd = DiffConfig{}.without_oracles();
  for (int i = 0; i < 10; ++i) {
    auto rng = stream_rng(7, i);
    EXPECT_NEAR(sectional_curvature(S2, uniform_in_ball(rng, 2, 1.0), gaussian_vec(rng, 2), gaussian_vec(rng, 2)),
                1.0, 1e-6);
    EXPECT_NEAR(sectional_curvature(S4, uniform_in_ball(rng, 4, 0.5), gaussian_vec(rng, 4), gaussian_vec(rng, 4), fd),
                3.0, 1e-4);
  }
}

TEST(SectionalCurvature, FlatPlane) {
  EXPECT_NEAR(sectional_curvature(euclidean(2), v2(1, 2), v2(1, 0), v2(0, 1)), 0.0, 1e-12);
}

TEST(SectionalCurvature, InvariantUnderChangeOfBasis) {
  const ManifoldModel S4 = stereo_chart(4, 0.7);
  for (int i = 0; i < 10; ++i) {
    auto rng = stream_rng(8, i);
    const Point x = uniform_in_ball(rng, 4, 0.6);
    const Vec u = gaussian_vec(rng, 4), v = gaussian_vec(rng, 4);
    const double a = uniform(rng, 0.5, 2), b = uniform(rng, -1, 1), c = uniform(rng, -1, 1), d = uniform(rng, 0.5, 2);
    const double k0 = sectional_curvature(S4, x, u, v), k1 = sectional_curvature(S4, x, a * u + b * v, c * u + d * v);
    EXPECT_NEAR(k0, k1, 10 * DiffConfig{}.tol_derivative);
  }
}

TEST(SectionalCurvature, DegeneratePlane) {
  const ManifoldModel S2 = stereo_chart(2, 1.0);
  EXPECT_THROW(sectional_curvature(S2, v2(0, 0), v2(1, 2), v2(2, 4)), DegenerateInputError);
}

TEST(STensor, ExponentialDilatation) {
  const Vec s = s_tensor(euclidean(2), exp_field(), v2(0.2, 0.1), v2(1, 0), v2(1, 0));
  EXPECT_NEAR(s(0), 1.0, 1e-12);
  EXPECT_NEAR(s(1), 0.0, 1e-12);
  const Vec t = s_tensor(euclidean(2), exp_field(), v2(0.2, 0.1), v2(0, 1), v2(0, 1));
  EXPECT_NEAR(t(0), -1.0, 1e-12);
  EXPECT_NEAR(t(1), 0.0, 1e-12);
}

TEST(STensor, ConstantDilatationVanishes) {
  const Vec s = s_tensor(stereo_chart(2, 1.0), ScalarField::constant(2.5), v2(0.2, 0.1), v2(1, 3), v2(-2, 1));
  EXPECT_LT(s.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(STensor, SymmetricAndRejectsNonPositive) {
  const Vec X = v2(0.3, -1.2), Y = v2(2.0, 0.5);
  EXPECT_EQ(s_tensor(euclidean(2), exp_field(), v2(0, 0), X, Y), s_tensor(euclidean(2), exp_field(), v2(0, 0), Y, X));
  EXPECT_THROW(s_tensor(euclidean(2), ScalarField::constant(0.0), v2(0, 0), X, Y), InvalidDilatationError);
}

TEST(DiffConfig, RejectsBadSteps) {
  DiffConfig c;
  c.step = -1.0;
  EXPECT_THROW(c.validate(), InvalidParamsError);
  DiffConfig d;
  d.tol_derivative = 0.0;
  EXPECT_THROW(d.validate(), InvalidParamsError);
}

TEST(FiniteDiff, RichardsonImprovesJacobian) {
  auto f = [](const Vec& x) { return Vec(Vec::Constant(1, std::exp(3.0 * x(0)))); };
  DiffConfig plain, rich;
  plain.step = rich.step = 1e-2;
  rich.richardson = true;
  const Vec x = Vec::Constant(1, 0.4);
  const double exact = 3.0 * std::exp(1.2);
  EXPECT_LT(std::abs(fd_jacobian(f, x, rich)(0, 0) - exact), std::abs(fd_jacobian(f, x, plain)(0, 0) - exact));
}
