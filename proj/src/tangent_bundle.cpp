#include "cgconf/tangent_bundle.hpp"

#include <cmath>

namespace cgconf {

BundleTangent BundleTangent::operator+(const BundleTangent& o) const {
  if (!(base == o.base)) throw InvalidPairError("adding tangent vectors at different points of TM");
  return {base, xdot + o.xdot, zdot + o.zdot};
}

BundleTangent BundleTangent::operator*(double s) const { return {base, s * xdot, s * zdot}; }

CGParams CGParams::constant(double p, double q, double alpha) {
  return {ScalarField::constant(p), ScalarField::constant(q), ScalarField::constant(alpha)};
}

void CGParams::validate_at(const Point& x) const {
  if (!(q(x) >= 0.0)) throw InvalidParamsError("q must be non-negative");
  if (!(alpha(x) > 0.0)) throw InvalidParamsError("alpha must be positive");
}

BundleTangent vertical_lift(const BundlePoint& at, const Vec& X) {
  return {at, Vec::Zero(at.x.size()), X};
}

Vec connection_map(const ManifoldModel& M, const BundleTangent& A, const DiffConfig& cfg) {
  const Christoffel G = christoffel_at(M, A.base.x, cfg);
  return A.zdot + G.contract(A.xdot, A.base.z);
}

BundleTangent horizontal_lift(const ManifoldModel& M, const BundlePoint& at, const Vec& v,
                              const DiffConfig& cfg) {
  const Christoffel G = christoffel_at(M, at.x, cfg);
  return {at, v, -G.contract(v, at.z)};
}

std::pair<BundleTangent, BundleTangent> hv_decompose(const ManifoldModel& M, const BundleTangent& A,
                                                     const DiffConfig& cfg) {
  BundleTangent V = vertical_lift(A.base, connection_map(M, A, cfg));
  BundleTangent H = horizontal_lift(M, A.base, A.xdot, cfg);
  return {std::move(H), std::move(V)};
}

double omega(const ManifoldModel& M, const CGParams& params, const BundlePoint& at) {
  const Mat g = metric_at(M, at.x);
  return 1.0 / (1.0 + params.alpha(at.x) * at.z.dot(g * at.z));
}

double cg_metric_eval(const ManifoldModel& M, const CGParams& params, const BundleTangent& A,
                      const BundleTangent& B, const DiffConfig& cfg) {
  if (!(A.base == B.base)) throw InvalidPairError("h(A,B) needs A and B in the same tangent space of TM");
  const Point& x = A.base.x;
  const Vec& Z = A.base.z;
  params.validate_at(x);
  const Mat g = metric_at(M, x);
  const Christoffel G = christoffel_at(M, x, cfg);
  const Vec KA = A.zdot + G.contract(A.xdot, Z);
  const Vec KB = B.zdot + G.contract(B.xdot, Z);

  const double w = 1.0 / (1.0 + params.alpha(x) * Z.dot(g * Z));
  const Vec gZ = g * Z;
  const double vert = KA.dot(g * KB) + params.q(x) * KA.dot(gZ) * KB.dot(gZ);
  return A.xdot.dot(g * B.xdot) + std::pow(w, params.p(x)) * vert;
}

Mat cg_metric_matrix(const ManifoldModel& M, const CGParams& params, const BundlePoint& at,
                     const DiffConfig&) {
  const Point& x = at.x;
  params.validate_at(x);
  const Mat g = metric_at(M, x);
  const int n = M.dim;
  const Vec gZ = g * at.z;
  const double w = 1.0 / (1.0 + params.alpha(x) * at.z.dot(gZ));

  Mat h = Mat::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = g;
  h.bottomRightCorner(n, n) = std::pow(w, params.p(x)) * (g + params.q(x) * gZ * gZ.transpose());
  return h;
}

Mat cg_metric_matrix_coordinates(const ManifoldModel& M, const CGParams& params,
                                 const BundlePoint& at, const DiffConfig& cfg) {
  const int n = M.dim;
  const Christoffel G = christoffel_at(M, at.x, cfg);
  // (ẋ, Ż) ↦ (ẋ, K) with K = Ż + Γ(ẋ, Z).
  Mat T = Mat::Identity(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) T.block(n, 0, n, n).col(i) = G.contract(Vec::Unit(n, i), at.z);
  return T.transpose() * cg_metric_matrix(M, params, at, cfg) * T;
}

}  // namespace cgconf
