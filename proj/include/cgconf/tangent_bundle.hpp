#pragma once

// The tangent bundle TM of a charted manifold: bundle points, tangent vectors
// of TM in raw chart velocities, the connection map K with its
// horizontal/vertical splitting, and the (p,q,α)-metrics
//
//   h(A,B) = g(π_*A, π_*B) + ω_α(Z)^p (g(KA,KB) + q g(KA,Z) g(KB,Z)),
//   ω_α(Z) = (1 + α g(Z,Z))^{-1},
//
// with p, q, α evaluated at the base point. h_{0,0,1} is the Sasaki metric and
// h_{1,1,1} the Cheeger-Gromoll metric.

#include "cgconf/manifold.hpp"

#include <utility>

namespace cgconf {

struct BundlePoint {
  Point x;
  Vec z;

  bool operator==(const BundlePoint& o) const {
    return x.size() == o.x.size() && z.size() == o.z.size() && x == o.x && z == o.z;
  }
};

/// A ∈ T_Z(TM) as the chart velocity (ẋ, Ż) of a curve t ↦ (x(t), Z(t)).
/// ẋ = π_*A. The horizontal/vertical split is derived through K, never stored.
struct BundleTangent {
  BundlePoint base;
  Vec xdot;
  Vec zdot;

  BundleTangent operator+(const BundleTangent& o) const;
  BundleTangent operator*(double s) const;
  friend BundleTangent operator*(double s, const BundleTangent& a) { return a * s; }
};

struct CGParams {
  ScalarField p;
  ScalarField q;
  ScalarField alpha;

  static CGParams constant(double p, double q, double alpha);
  static CGParams sasaki() { return constant(0.0, 0.0, 1.0); }
  static CGParams cheeger_gromoll() { return constant(1.0, 1.0, 1.0); }

  /// Throws InvalidParamsError unless q(x) ≥ 0 and α(x) > 0.
  void validate_at(const Point& x) const;
};

/// The vertical lift X^v_Z: tangent to t ↦ Z + tX.
BundleTangent vertical_lift(const BundlePoint& at, const Vec& X);

/// K(A) = Ż + Γ_x(ẋ, Z).
Vec connection_map(const ManifoldModel& M, const BundleTangent& A, const DiffConfig& cfg = {});

/// The unique horizontal A with π_*A = v: (v, −Γ_x(v, Z)).
BundleTangent horizontal_lift(const ManifoldModel& M, const BundlePoint& at, const Vec& v,
                              const DiffConfig& cfg = {});

/// A = H + V with K(H) = 0 and V the vertical lift of K(A).
std::pair<BundleTangent, BundleTangent> hv_decompose(const ManifoldModel& M, const BundleTangent& A,
                                                     const DiffConfig& cfg = {});

/// ω_α(Z) = (1 + α g(Z,Z))^{-1}.
double omega(const ManifoldModel& M, const CGParams& params, const BundlePoint& at);

/// h_{p,q,α}(A, B). Throws InvalidPairError when A and B sit over different
/// points of TM.
double cg_metric_eval(const ManifoldModel& M, const CGParams& params, const BundleTangent& A,
                      const BundleTangent& B, const DiffConfig& cfg = {});

/// h in the adapted frame (horizontal lifts of ∂_i, then vertical lifts of ∂_i):
/// block-diagonal g ⊕ ω^p (g + q (gZ)(gZ)ᵀ).
Mat cg_metric_matrix(const ManifoldModel& M, const CGParams& params, const BundlePoint& at,
                     const DiffConfig& cfg = {});

/// h in raw chart velocities: h(A,B) = [ẋ_A; Ż_A]ᵀ H [ẋ_B; Ż_B].
Mat cg_metric_matrix_coordinates(const ManifoldModel& M, const CGParams& params,
                                 const BundlePoint& at, const DiffConfig& cfg = {});

}  // namespace cgconf
