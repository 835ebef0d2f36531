#pragma once

// Symmetric bilinear forms B: V×V → W between inner-product spaces and the
// condition
//
//   ⟨B(X,Z), B(Y,Z)⟩_W = C ⟨X,Y⟩_V ⟨Z,Z⟩_V    for all X, Y, Z ∈ V.      (E1)
//
// In dim V = 2 the solutions are the complex-multiplication forms
// B(X,Y) = ±√C e^{iθ} XY or ±√C e^{iθ} X̄Ȳ (ℝ² ≅ ℂ); in dim V ≥ 3 only C = 0,
// B = 0 is possible.
//
// Both sides of (E1) are bilinear in (X, Y) and quadratic in Z, so the
// identity holds everywhere once it holds on all triples drawn from the basis
// vectors together with the pairwise sums e_i + e_j. All residuals below are
// evaluated on that spanning set.

#include "cgconf/types.hpp"

#include <array>
#include <cstdint>
#include <variant>

namespace cgconf {

class SymBilinearForm {
 public:
  /// The zero form.
  SymBilinearForm(int dim_v, int dim_w);

  /// From coefficients coeffs[k](i,j) = component k of B(e_i, e_j). Throws
  /// InvalidParamsError unless every coeffs[k] is symmetric.
  explicit SymBilinearForm(std::vector<Mat> coeffs);

  int dim_v() const { return dim_v_; }
  int dim_w() const { return dim_w_; }
  const std::vector<Mat>& coeffs() const { return coeffs_; }

  /// B(e_i, e_j).
  Vec at(int i, int j) const;
  /// Sets B(e_i, e_j) = B(e_j, e_i) = w.
  void set(int i, int j, const Vec& w);

  Vec operator()(const Vec& X, const Vec& Y) const;

 private:
  int dim_v_;
  int dim_w_;
  std::vector<Mat> coeffs_;
};

/// Inner products G(i,k,j,l) = ⟨B(e_i,e_k), B(e_j,e_l)⟩ with respect to an
/// orthonormal basis of V. (E1) and its residual depend on B only through
/// this tensor, which is how second fundamental forms are handled without
/// materializing them as vectors.
class FormGram {
 public:
  explicit FormGram(int dim);

  static FormGram of(const SymBilinearForm& B);

  int dim() const { return dim_; }
  double& operator()(int i, int k, int j, int l) { return data_[((i * dim_ + k) * dim_ + j) * dim_ + l]; }
  double operator()(int i, int k, int j, int l) const {
    return data_[((i * dim_ + k) * dim_ + j) * dim_ + l];
  }

  /// ⟨B(X,Z), B(Y,W)⟩.
  double inner(const Vec& X, const Vec& Z, const Vec& Y, const Vec& W) const;

 private:
  int dim_;
  std::vector<double> data_;
};

/// Basis vectors followed by the pairwise sums e_i + e_j, i < j.
std::vector<Vec> spanning_set(int dim);

struct E1Violation {
  Vec X, Y, Z;
  double residual = 0.0;
};

/// max over spanning triples of |⟨B(X,Z),B(Y,Z)⟩ − C⟨X,Y⟩⟨Z,Z⟩|.
double e1_residual(const SymBilinearForm& B, double C);
double e1_residual(const FormGram& G, double C);

/// The spanning triple with the largest violation.
E1Violation e1_worst_triple(const FormGram& G, double C);

/// Mean of |B(e_i,e_k)|² over ordered pairs i ≠ k (|B(e_1,e_1)|² when dim V = 1).
double best_fit_C(const SymBilinearForm& B);
double best_fit_C(const FormGram& G);

/// C minimizing the sum of squared (E1) violations over the spanning set.
double least_squares_C(const FormGram& G);

struct E1Report {
  double best_fit_C = 0.0;
  double residual = 0.0;
  bool satisfied = false;
};

E1Report check_e1(const SymBilinearForm& B, double tol);

enum class Branch { Plain, Conjugate };

struct ComplexFormParams {
  double C = 0.0;
  double theta = 0.0;  ///< in [0, π)
  Branch branch = Branch::Plain;
  int sign = 1;  ///< ±1
};

/// B(X,Y) = sign·√C·e^{iθ}·XY (plain) or sign·√C·e^{iθ}·X̄Ȳ (conjugate),
/// with ℝ² identified with ℂ.
SymBilinearForm complex_mult_form(double C, double theta, Branch branch, int sign = 1);
SymBilinearForm complex_mult_form(const ComplexFormParams& p);

struct Dim2Classification {
  ComplexFormParams params;
  /// Orthonormal basis (columns) of the plane in W the form is expressed in;
  /// the identity when dim W = 2.
  Mat basis;
  double residual = 0.0;
};

struct Dim2Rejection {
  E1Violation witness;
  double C = 0.0;
};

/// Recover complex-multiplication parameters of a form on a 2-dimensional V.
/// θ is normalized to [0, π) with the sign absorbing the rest. For dim W > 2
/// the form is first expressed in the orthonormal basis ξ/√C, η/√C of its
/// image, ξ = B(e_1,e_1), η = B(e_1,e_2).
std::variant<Dim2Classification, Dim2Rejection> classify_dim2_form(const SymBilinearForm& B,
                                                                   double tol = 1e-9);

struct Dim3Certificate {
  double best_C = 0.0;
  double residual_at_best_C = 0.0;
  /// |ξ+ζ|, |ζ+η|, |η+ξ|, |ξ|²−C for ξ,ζ,η = B(e_1,e_1), B(e_2,e_2), B(e_3,e_3).
  std::array<double, 4> chain{};
  /// False only if B satisfies (E1) with a nonzero coefficient.
  bool consistent_with_vanishing = true;
};

/// Throws InvalidParamsError when dim V < 3.
Dim3Certificate dim_ge3_certificate(const SymBilinearForm& B, double tol);

struct E1SearchResult {
  double best_residual = 0.0;
  SymBilinearForm best_form{1, 1};
  int restarts = 0;
  std::uint64_t seed = 0;
};

/// Random-restart Levenberg-Marquardt search for a form satisfying (E1) with
/// the given C. Starting points are Gaussian forms scaled to unit Frobenius
/// norm; each restart is seeded from (seed, restart index).
E1SearchResult search_e1_minimum(int dim_v, int dim_w, double C, int restarts, std::uint64_t seed);

}  // namespace cgconf
