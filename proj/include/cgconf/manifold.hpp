#pragma once

// Charted Riemannian manifolds and the local differential geometry the rest of
// the library is built on: metric evaluation, Levi-Civita Christoffel symbols,
// gradients, sectional curvature and the conformal-change tensor S.
//
// Each ManifoldModel is a single chart. Quantities are expressed in the
// coordinate frame of that chart.

#include "cgconf/finite_diff.hpp"
#include "cgconf/types.hpp"

#include <functional>
#include <optional>
#include <string>

namespace cgconf {

/// Christoffel symbols of the second kind, Γ^k_ij, stored densely.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int k, int i, int j) { return data_[(k * dim_ + i) * dim_ + j]; }
  double operator()(int k, int i, int j) const { return data_[(k * dim_ + i) * dim_ + j]; }

  /// Γ(u, v)^k = Γ^k_ij u^i v^j.
  Vec contract(const Vec& u, const Vec& v) const;

  double max_abs_diff(const Christoffel& other) const;

 private:
  int dim_ = 0;
  std::vector<double> data_;
};

struct ManifoldModel {
  std::string name;
  int dim = 0;
  std::function<Mat(const Point&)> metric;
  /// Analytic Christoffel symbols; finite differences of the metric otherwise.
  std::function<Christoffel(const Point&)> christoffel_oracle;
  /// Optional map into a Euclidean space.
  std::optional<ChartMap> embedding;
  /// Chart domain; everything is admissible when unset.
  std::function<bool(const Point&)> domain;

  bool contains(const Point& x) const { return x.size() == dim && (!domain || domain(x)); }
};

/// A real function on a chart. The gradient oracle, when present, returns the
/// coordinate partials ∂f/∂x^i (the differential), not the metric gradient.
struct ScalarField {
  std::function<double(const Point&)> eval;
  std::function<Vec(const Point&)> gradient_oracle;

  double operator()(const Point& x) const { return eval(x); }

  static ScalarField constant(double c);
};

/// Coordinate partials of f at x (oracle or finite differences).
Vec differential(const ScalarField& f, const Point& x, const DiffConfig& cfg);

/// Throws DomainError when x lies outside the chart domain.
void require_in_domain(const ManifoldModel& M, const Point& x);

Mat metric_at(const ManifoldModel& M, const Point& x);

/// g(u, v) at x.
double inner(const ManifoldModel& M, const Point& x, const Vec& u, const Vec& v);

/// Levi-Civita symbols, from the oracle when present and allowed by cfg,
/// otherwise from central differences of the metric. Throws
/// ConditioningError when the metric is numerically singular.
Christoffel christoffel_at(const ManifoldModel& M, const Point& x, const DiffConfig& cfg = {});

/// Always the finite-difference route, regardless of any oracle.
Christoffel christoffel_fd(const ManifoldModel& M, const Point& x, const DiffConfig& cfg = {});

/// Partials ∂_k g at x, one matrix per coordinate direction.
std::vector<Mat> metric_partials(const ManifoldModel& M, const Point& x, const DiffConfig& cfg = {});

/// g⁻¹ df.
Vec grad_scalar(const ManifoldModel& M, const ScalarField& f, const Point& x,
                const DiffConfig& cfg = {});

/// Coefficients R^l_ijk of R(∂_i, ∂_j)∂_k = ∇_i∇_j∂_k − ∇_j∇_i∂_k, laid out
/// as R[l](i, j·dim + k).
std::vector<Mat> riemann_at(const ManifoldModel& M, const Point& x, const DiffConfig& cfg = {});

/// Sectional curvature g(R(u,v)v, u) / (|u|²|v|² − g(u,v)²); positive on
/// round spheres. Throws DegenerateInputError when the g-Gram determinant is
/// below 1e-12·|u|²|v|².
double sectional_curvature(const ManifoldModel& M, const Point& x, const Vec& u, const Vec& v,
                           const DiffConfig& cfg = {});

/// S(X,Y) = (1/2λ)((Xλ)Y + (Yλ)X − g(X,Y) grad λ), the difference between the
/// Levi-Civita connections of λg and g. Throws InvalidDilatationError when
/// λ(x) ≤ 0.
Vec s_tensor(const ManifoldModel& M, const ScalarField& lambda, const Point& x, const Vec& X,
             const Vec& Y, const DiffConfig& cfg = {});

}  // namespace cgconf
