#include "cgconf/finite_diff.hpp"
#include "cgconf/jet.hpp"
#include "cgconf/sampling.hpp"

#include <gtest/gtest.h>

using namespace cgconf;

TEST(Jet, ProductRule) {
  // f(x, y) = x² y at (2, 3): grad (12, 4), Hessian [[6, 4], [4, 0]].
  const Jet x = Jet::variable(2.0, 0, 2), y = Jet::variable(3.0, 1, 2);
  const Jet f = x * x * y;
  EXPECT_DOUBLE_EQ(f.value(), 12.0);
  EXPECT_DOUBLE_EQ(f.grad()(0), 12.0);
  EXPECT_DOUBLE_EQ(f.grad()(1), 4.0);
  EXPECT_DOUBLE_EQ(f.hess()(0, 0), 6.0);
  EXPECT_DOUBLE_EQ(f.hess()(0, 1), 4.0);
  EXPECT_DOUBLE_EQ(f.hess()(1, 0), 4.0);
  EXPECT_DOUBLE_EQ(f.hess()(1, 1), 0.0);
}

TEST(Jet, Reciprocal) {
  const Jet x = Jet::variable(2.0, 0, 1);
  const Jet r = 1.0 / x;
  EXPECT_DOUBLE_EQ(r.value(), 0.5);
  EXPECT_DOUBLE_EQ(r.grad()(0), -0.25);
  EXPECT_DOUBLE_EQ(r.hess()(0, 0), 0.25);
}

TEST(Jet, ElementaryFunctions) {
  const double a = 0.7;
  const Jet x = Jet::variable(a, 0, 1);
  EXPECT_NEAR(sin(x).hess()(0, 0), -std::sin(a), 1e-15);
  EXPECT_NEAR(cos(x).grad()(0), -std::sin(a), 1e-15);
  EXPECT_NEAR(exp(x).hess()(0, 0), std::exp(a), 1e-15);
  EXPECT_NEAR(log(x).hess()(0, 0), -1.0 / (a * a), 1e-14);
  EXPECT_NEAR(sqrt(x).grad()(0), 0.5 / std::sqrt(a), 1e-15);
  EXPECT_NEAR(pow(x, 3.0).hess()(0, 0), 6.0 * a, 1e-14);
}

TEST(Jet, TooManyVariables) {
  auto f = [](const std::vector<Jet>& v) { return v; };
  EXPECT_THROW(jet_derivatives(f, Vec::Zero(kMaxJetVars + 1)), InvalidParamsError);
}

TEST(Jet, AgreesWithFiniteDifferences) {
  auto fj = [](const std::vector<Jet>& v) {
    return std::vector<Jet>{sin(v[0]) * exp(v[1]) / (1.0 + v[2] * v[2]), v[0] * v[1] * v[2] + sqrt(2.0 + v[0])};
  };
  auto fd = [](const Vec& v) {
    Vec o(2);
    o << std::sin(v(0)) * std::exp(v(1)) / (1.0 + v(2) * v(2)), v(0) * v(1) * v(2) + std::sqrt(2.0 + v(0));
    return o;
  };
  DiffConfig cfg;
  for (int i = 0; i < 20; ++i) {
    auto rng = stream_rng(11, i);
    const Vec x = uniform_in_ball(rng, 3, 1.0);
    const JetResult r = jet_derivatives(fj, x);
    EXPECT_LT((r.value - fd(x)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((r.jacobian - fd_jacobian(fd, x, cfg)).cwiseAbs().maxCoeff(), 1e-8);

    ChartMap m{3, 2, fd, {}, {}};
    const Hessian h = hessian(m, x, cfg);
    for (int a = 0; a < 2; ++a) EXPECT_LT((r.hessian.comps[a] - h.comps[a]).cwiseAbs().maxCoeff(), 1e-5);
  }
}
