#include "cgconf/bilinear.hpp"
#include "cgconf/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cgconf;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

/// B(X,Y) = ⟨X,Y⟩ w on ℝ².
SymBilinearForm inner_times(const Vec& w) {
  SymBilinearForm B(2, static_cast<int>(w.size()));
  B.set(0, 0, w);
  B.set(1, 1, w);
  return B;
}

/// Plane-to-ℂ product, independent of the library: (a + bi)(c + di).
Vec cmul(const Vec& x, const Vec& y) { return v2(x(0) * y(0) - x(1) * y(1), x(0) * y(1) + x(1) * y(0)); }
Vec conj(const Vec& x) { return v2(x(0), -x(1)); }

}  // namespace

TEST(E1Residual, ZeroForm) { EXPECT_EQ(e1_residual(SymBilinearForm(3, 2), 0.0), 0.0); }

TEST(E1Residual, ComplexFormSatisfiesCondition) {
  EXPECT_LE(e1_residual(complex_mult_form(4.0, M_PI / 3, Branch::Plain), 4.0), 1e-12);
}

TEST(E1Residual, InnerProductFormFails) {
  EXPECT_GT(e1_residual(inner_times(v2(1, 0)), 1.0), 0.5);
}

TEST(E1Residual, RandomComplexForms) {
  for (int n = 0; n < 100; ++n) {
    auto rng = stream_rng(1, n);
    const double C = uniform(rng, 0, 5), theta = uniform(rng, 0, 2 * M_PI);
    const Branch br = n % 2 ? Branch::Plain : Branch::Conjugate;
    EXPECT_LE(e1_residual(complex_mult_form(C, theta, br, n % 3 ? 1 : -1), C), 1e-12);
  }
}

TEST(ComplexForm, UnitExamples) {
  const SymBilinearForm P = complex_mult_form(1.0, 0.0, Branch::Plain);
  EXPECT_EQ(P.at(0, 0), v2(1, 0));
  EXPECT_EQ(P.at(0, 1), v2(0, 1));
  EXPECT_EQ(P.at(1, 1), v2(-1, 0));
  const SymBilinearForm Q = complex_mult_form(1.0, 0.0, Branch::Conjugate);
  EXPECT_EQ(Q.at(0, 1), v2(0, -1));
  EXPECT_EQ(Q.at(1, 1), v2(-1, 0));
}

TEST(ComplexForm, ScalingAndTrace) {
  const SymBilinearForm A = complex_mult_form(1.0, 0.7, Branch::Plain), B = complex_mult_form(4.0, 0.7, Branch::Plain);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_LT((B.at(i, j) - 2.0 * A.at(i, j)).norm(), 1e-15);
  EXPECT_EQ(B.at(0, 0) + B.at(1, 1), Vec::Zero(2));
}

TEST(ComplexForm, MatchesDirectComplexArithmetic) {
  for (int n = 0; n < 20; ++n) {
    auto rng = stream_rng(2, n);
    const double C = uniform(rng, 0, 3), theta = uniform(rng, 0, 6);
    const Vec w = std::sqrt(C) * v2(std::cos(theta), std::sin(theta));
    const Vec X = gaussian_vec(rng, 2), Y = gaussian_vec(rng, 2);
    EXPECT_LT((complex_mult_form(C, theta, Branch::Plain)(X, Y) - cmul(w, cmul(X, Y))).norm(), 1e-13);
    EXPECT_LT((complex_mult_form(C, theta, Branch::Conjugate, -1)(X, Y) + cmul(w, cmul(conj(X), conj(Y)))).norm(),
              1e-13);
  }
}

TEST(ComplexForm, RejectsBadInputs) {
  EXPECT_THROW(complex_mult_form(-1.0, 0.0, Branch::Plain), InvalidParamsError);
  EXPECT_THROW(complex_mult_form(1.0, 0.0, Branch::Plain, 2), InvalidParamsError);
}

TEST(SymBilinearForm, RejectsAsymmetricCoefficients) {
  EXPECT_THROW(SymBilinearForm(std::vector<Mat>{(Mat(2, 2) << 1, 2, 3, 4).finished()}), InvalidParamsError);
}

TEST(E1, OrthogonalDiagonalPairsAreAntiCorrelated) {
  // ⟨B(X,X),B(Y,Y)⟩ = −C for orthonormal X, Y whenever B satisfies the condition.
  for (int n = 0; n < 20; ++n) {
    auto rng = stream_rng(3, n);
    const double C = uniform(rng, 0.1, 3);
    const SymBilinearForm B = complex_mult_form(C, uniform(rng, 0, 3), Branch::Conjugate);
    const double a = uniform(rng, 0, 6);
    const Vec X = v2(std::cos(a), std::sin(a)), Y = v2(-std::sin(a), std::cos(a));
    EXPECT_NEAR(B(X, X).dot(B(Y, Y)), -C, 1e-11);
  }
}

TEST(BestFitC, ComplexForms) {
  EXPECT_NEAR(best_fit_C(complex_mult_form(2.5, 0.3, Branch::Plain)), 2.5, 1e-14);
  EXPECT_NEAR(least_squares_C(FormGram::of(complex_mult_form(2.5, 0.3, Branch::Plain))), 2.5, 1e-13);
  const E1Report r = check_e1(complex_mult_form(2.5, 0.3, Branch::Plain), 1e-12);
  EXPECT_TRUE(r.satisfied);
  EXPECT_FALSE(check_e1(inner_times(v2(0, 1)), 1e-6).satisfied);
}

TEST(ClassifyDim2, RoundTrip) {
  const auto r = classify_dim2_form(complex_mult_form(2.5, 1.1, Branch::Plain, 1));
  const auto* ok = std::get_if<Dim2Classification>(&r);
  ASSERT_NE(ok, nullptr);
  EXPECT_NEAR(ok->params.C, 2.5, 1e-12);
  EXPECT_NEAR(ok->params.theta, 1.1, 1e-12);
  EXPECT_EQ(ok->params.branch, Branch::Plain);
  EXPECT_EQ(ok->params.sign, 1);
}

TEST(ClassifyDim2, GaugeNormalization) {
  // θ + π with the opposite sign is the same form.
  const auto r = classify_dim2_form(complex_mult_form(1.5, 1.1 + M_PI, Branch::Conjugate, 1));
  const auto* ok = std::get_if<Dim2Classification>(&r);
  ASSERT_NE(ok, nullptr);
  EXPECT_NEAR(ok->params.theta, 1.1, 1e-12);
  EXPECT_EQ(ok->params.sign, -1);
  EXPECT_EQ(ok->params.branch, Branch::Conjugate);
}

TEST(ClassifyDim2, RandomRoundTrips) {
  for (int n = 0; n < 100; ++n) {
    auto rng = stream_rng(4, n);
    const SymBilinearForm B = complex_mult_form(uniform(rng, 0.1, 4), uniform(rng, -6, 6),
                                                n % 2 ? Branch::Plain : Branch::Conjugate, n % 3 ? 1 : -1);
    const auto r = classify_dim2_form(B);
    const auto* ok = std::get_if<Dim2Classification>(&r);
    ASSERT_NE(ok, nullptr);
    EXPECT_GE(ok->params.theta, 0.0);
    EXPECT_LT(ok->params.theta, M_PI);
    const SymBilinearForm R = complex_mult_form(ok->params);
    for (int k = 0; k < 2; ++k) EXPECT_LT((R.coeffs()[k] - B.coeffs()[k]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ClassifyDim2, ZeroFormAccepted) {
  const auto r = classify_dim2_form(SymBilinearForm(2, 2));
  const auto* ok = std::get_if<Dim2Classification>(&r);
  ASSERT_NE(ok, nullptr);
  EXPECT_EQ(ok->params.C, 0.0);
}

TEST(ClassifyDim2, InnerProductFormRejectedWithWitness) {
  const auto r = classify_dim2_form(inner_times(v2(1, 0)));
  const auto* bad = std::get_if<Dim2Rejection>(&r);
  ASSERT_NE(bad, nullptr);
  EXPECT_GT(bad->witness.residual, 0.5);
  const SymBilinearForm B = inner_times(v2(1, 0));
  const Vec& X = bad->witness.X;
  const Vec& Y = bad->witness.Y;
  const Vec& Z = bad->witness.Z;
  EXPECT_NEAR(std::abs(B(X, Z).dot(B(Y, Z)) - bad->C * X.dot(Y) * Z.squaredNorm()), bad->witness.residual, 1e-12);
}

TEST(ClassifyDim2, WiderTargetSpace) {
  // Rotate a complex form into a plane of ℝ⁴.
  const SymBilinearForm B2 = complex_mult_form(2.0, 0.4, Branch::Plain);
  Mat U = Mat::Zero(4, 2);
  U(0, 0) = U(2, 1) = 1.0 / std::sqrt(2.0);
  U(1, 0) = 1.0 / std::sqrt(2.0);
  U(3, 1) = -1.0 / std::sqrt(2.0);
  std::vector<Mat> c(4, Mat::Zero(2, 2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vec w = U * B2.at(i, j);
      for (int k = 0; k < 4; ++k) c[k](i, j) = w(k);
    }
  const auto r = classify_dim2_form(SymBilinearForm(c));
  const auto* ok = std::get_if<Dim2Classification>(&r);
  ASSERT_NE(ok, nullptr);
  EXPECT_NEAR(ok->params.C, 2.0, 1e-12);
  EXPECT_EQ(ok->basis.cols(), 2);
  EXPECT_LT((ok->basis.transpose() * ok->basis - Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Dim3Certificate, ZeroForm) {
  const Dim3Certificate c = dim_ge3_certificate(SymBilinearForm(3, 2), 1e-9);
  EXPECT_EQ(c.best_C, 0.0);
  EXPECT_EQ(c.residual_at_best_C, 0.0);
  EXPECT_TRUE(c.consistent_with_vanishing);
}

TEST(Dim3Certificate, ZeroExtendedComplexForm) {
  const SymBilinearForm B2 = complex_mult_form(1.0, 0.0, Branch::Plain);
  SymBilinearForm B3(3, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) B3.set(i, j, B2.at(i, j));
  EXPECT_GT(e1_residual(B3, 1.0), 0.5);
  EXPECT_TRUE(dim_ge3_certificate(B3, 1e-9).consistent_with_vanishing);
}

TEST(Dim3Certificate, RandomFormsNeverContradict) {
  for (int n = 0; n < 100; ++n) {
    auto rng = stream_rng(5, n);
    std::vector<Mat> c;
    for (int k = 0; k < 3; ++k) {
      const Mat g = Eigen::Map<const Mat>(gaussian_vec(rng, 9).data(), 3, 3);
      c.push_back(g + g.transpose());
    }
    const Dim3Certificate cert = dim_ge3_certificate(SymBilinearForm(c), 1e-6);
    EXPECT_TRUE(cert.consistent_with_vanishing);
    EXPECT_GT(cert.residual_at_best_C, 1e-6);
  }
}

TEST(Dim3Certificate, NeedsThreeDimensions) {
  EXPECT_THROW(dim_ge3_certificate(SymBilinearForm(2, 2), 1e-9), InvalidParamsError);
}

TEST(E1Search, FindsDim2Solutions) {
  // The minimizer does reach zero where solutions exist.
  const E1SearchResult r = search_e1_minimum(2, 2, 1.0, 20, 3);
  EXPECT_LT(r.best_residual, 1e-8);
  EXPECT_LT(e1_residual(r.best_form, 1.0), 1e-8);
}

TEST(E1Search, NothingInDim3) {
  const E1SearchResult r = search_e1_minimum(3, 6, 1.0, 200, 17);
  EXPECT_GE(r.best_residual, 1e-3);
  EXPECT_EQ(r.restarts, 200);
}

TEST(E1Search, Deterministic) {
  const E1SearchResult a = search_e1_minimum(3, 4, 1.0, 10, 5), b = search_e1_minimum(3, 4, 1.0, 10, 5);
  EXPECT_EQ(a.best_residual, b.best_residual);
}
