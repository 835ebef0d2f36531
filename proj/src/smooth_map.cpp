#include "cgconf/smooth_map.hpp"

namespace cgconf {

Point SmoothMap::operator()(const Point& x) const {
  require_in_domain(source, x);
  return map.eval(x);
}

SmoothMap identity_map(const ManifoldModel& M) {
  return linear_map(M, M, Mat::Identity(M.dim, M.dim));
}

SmoothMap linear_map(const ManifoldModel& source, const ManifoldModel& target, const Mat& L) {
  if (L.rows() != target.dim || L.cols() != source.dim)
    throw InvalidParamsError("linear_map: matrix shape does not match the models");
  SmoothMap phi;
  phi.name = "linear";
  phi.source = source;
  phi.target = target;
  phi.map.in_dim = source.dim;
  phi.map.out_dim = target.dim;
  phi.map.eval = [L](const Vec& x) { return (L * x).eval(); };
  phi.map.jacobian_oracle = [L](const Vec&) { return L; };
  phi.map.hessian_oracle = [L](const Vec&) {
    return Hessian{std::vector<Mat>(L.rows(), Mat::Zero(L.cols(), L.cols()))};
  };
  phi.immersion = Eigen::FullPivLU<Mat>(L).rank() == source.dim;
  return phi;
}

SmoothMap compose(const SmoothMap& first, const SmoothMap& second) {
  SmoothMap phi;
  phi.name = second.name + " o " + first.name;
  phi.source = first.source;
  phi.target = second.target;
  phi.map = compose(first.map, second.map);
  phi.immersion = first.immersion && second.immersion;
  return phi;
}

Mat map_jacobian(const SmoothMap& phi, const Point& x, const DiffConfig& cfg) {
  require_in_domain(phi.source, x);
  return jacobian(phi.map, x, cfg);
}

Hessian map_hessian(const SmoothMap& phi, const Point& x, const DiffConfig& cfg) {
  require_in_domain(phi.source, x);
  return hessian(phi.map, x, cfg);
}

Vec pushforward(const SmoothMap& phi, const Point& x, const Vec& v, const DiffConfig& cfg) {
  return map_jacobian(phi, x, cfg) * v;
}

BundleTangent bundle_differential(const SmoothMap& phi, const BundleTangent& A, const DiffConfig& cfg) {
  const Point& x = A.base.x;
  const Mat J = map_jacobian(phi, x, cfg);
  const Hessian H = map_hessian(phi, x, cfg);
  BundleTangent out;
  out.base = {phi.map.eval(x), J * A.base.z};
  out.xdot = J * A.xdot;
  out.zdot = H.apply(A.xdot, A.base.z) + J * A.zdot;
  return out;
}

Mat bundle_differential_matrix(const SmoothMap& phi, const BundlePoint& at, const DiffConfig& cfg) {
  const Mat J = map_jacobian(phi, at.x, cfg);
  const Hessian H = map_hessian(phi, at.x, cfg);
  const int m = static_cast<int>(J.cols()), mp = static_cast<int>(J.rows());
  Mat D = Mat::Zero(2 * mp, 2 * m);
  D.topLeftCorner(mp, m) = J;
  D.bottomRightCorner(mp, m) = J;
  for (int i = 0; i < m; ++i) D.block(mp, 0, mp, m).col(i) = H.apply(Vec::Unit(m, i), at.z);
  return D;
}

}  // namespace cgconf
