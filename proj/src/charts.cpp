#include "cgconf/charts.hpp"

#include "cgconf/jet.hpp"

#include <cmath>

namespace cgconf {

namespace {

template <class T>
std::vector<T> stereo_embed(const std::vector<T>& y, double rho) {
  const int d = static_cast<int>(y.size());
  T s = y[0] * y[0];
  for (int i = 1; i < d; ++i) s = s + y[i] * y[i];
  const T inv = 1.0 / (s + rho * rho);
  std::vector<T> X;
  X.reserve(d + 1);
  for (int i = 0; i < d; ++i) X.push_back(2.0 * rho * rho * y[i] * inv);
  X.push_back(rho * (s - rho * rho) * inv);
  return X;
}

template <class T>
std::vector<T> stereo_project(const std::vector<T>& X, double rho) {
  const int d = static_cast<int>(X.size()) - 1;
  const T inv = 1.0 / (rho - X[d]);
  std::vector<T> y;
  y.reserve(d);
  for (int i = 0; i < d; ++i) y.push_back(rho * X[i] * inv);
  return y;
}

template <class T>
std::vector<T> veronese_poly(const std::vector<T>& x) {
  const double c = std::sqrt(3.0) / 6.0;
  return {x[1] * x[2], x[0] * x[2], x[0] * x[1], 0.5 * (x[0] * x[0] - x[1] * x[1]),
          c * (x[0] * x[0] + x[1] * x[1] - 2.0 * x[2] * x[2])};
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

/// ChartMap whose derivative oracles are read off second-order jets.
ChartMap jet_chart_map(int in_dim, int out_dim,
                       std::function<std::vector<double>(const std::vector<double>&)> f,
                       std::function<std::vector<Jet>(const std::vector<Jet>&)> fj) {
  ChartMap m;
  m.in_dim = in_dim;
  m.out_dim = out_dim;
  m.eval = [f](const Vec& x) { return to_vec(f(to_std(x))); };
  m.jacobian_oracle = [fj](const Vec& x) { return jet_derivatives(fj, x).jacobian; };
  m.hessian_oracle = [fj](const Vec& x) { return jet_derivatives(fj, x).hessian; };
  return m;
}

}  // namespace

ManifoldModel euclidean(int n) {
  if (n < 1) throw InvalidParamsError("euclidean: dimension must be positive");
  ManifoldModel M;
  M.name = "R" + std::to_string(n);
  M.dim = n;
  M.metric = [n](const Point&) { return Mat::Identity(n, n); };
  M.christoffel_oracle = [n](const Point&) { return Christoffel(n); };
  ChartMap id;
  id.in_dim = id.out_dim = n;
  id.eval = [](const Vec& x) { return x; };
  id.jacobian_oracle = [n](const Vec&) { return Mat::Identity(n, n); };
  id.hessian_oracle = [n](const Vec&) { return Hessian{std::vector<Mat>(n, Mat::Zero(n, n))}; };
  M.embedding = id;
  return M;
}

ManifoldModel stereo_chart(int d, double rho) {
  if (d < 1) throw InvalidParamsError("stereo_chart: dimension must be positive");
  if (!(rho > 0.0)) throw InvalidParamsError("stereo_chart: radius must be positive");
  ManifoldModel M;
  M.name = "S" + std::to_string(d) + "(" + std::to_string(rho) + ")";
  M.dim = d;
  const double r2 = rho * rho;
  M.metric = [d, r2](const Point& y) {
    const double den = y.squaredNorm() + r2;
    return Mat((4.0 * r2 * r2 / (den * den)) * Mat::Identity(d, d));
  };
  // g = e^{2u} δ with ∂_i u = −2y_i/(|y|² + ρ²).
  M.christoffel_oracle = [d, r2](const Point& y) {
    const Vec du = (-2.0 / (y.squaredNorm() + r2)) * y;
    Christoffel G(d);
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          G(k, i, j) = (i == k ? du(j) : 0.0) + (j == k ? du(i) : 0.0) - (i == j ? du(k) : 0.0);
    return G;
  };
  M.embedding = jet_chart_map(
      d, d + 1, [rho](const std::vector<double>& y) { return stereo_embed(y, rho); },
      [rho](const std::vector<Jet>& y) { return stereo_embed(y, rho); });
  return M;
}

ManifoldModel hemisphere_chart() {
  ManifoldModel M = stereo_chart(2, 1.0);
  M.name = "S2(1) lower hemisphere";
  M.domain = [](const Point& t) { return t.squaredNorm() < 1.0; };
  return M;
}

double veronese_radius() { return 1.0 / std::sqrt(3.0); }

Vec veronese(const Vec& x) {
  if (x.size() != 3 || std::abs(x.norm() - 1.0) > 1e-9)
    throw DomainError("veronese: input must be a unit vector of R3");
  return to_vec(veronese_poly(to_std(x)));
}

SmoothMap veronese_map() {
  const double rho = veronese_radius();
  SmoothMap phi;
  phi.name = "veronese";
  phi.source = hemisphere_chart();
  phi.target = stereo_chart(4, rho);
  phi.map = jet_chart_map(
      2, 4,
      [rho](const std::vector<double>& t) { return stereo_project(veronese_poly(stereo_embed(t, 1.0)), rho); },
      [rho](const std::vector<Jet>& t) { return stereo_project(veronese_poly(stereo_embed(t, 1.0)), rho); });
  return phi;
}

SmoothMap equator_inclusion(double rho) {
  Mat L = Mat::Zero(4, 2);
  L(0, 0) = L(1, 1) = 1.0;
  SmoothMap phi = linear_map(stereo_chart(2, rho), stereo_chart(4, rho), L);
  phi.name = "equator";
  return phi;
}

SmoothMap latitude_circle(double theta0) {
  const double s0 = std::sin(theta0);
  if (!(s0 > 0.0)) throw InvalidParamsError("latitude_circle: colatitude must lie in (0, pi)");
  const double r = s0 / (1.0 - std::cos(theta0));

  ManifoldModel src;
  src.name = "circle";
  src.dim = 1;
  src.metric = [s0](const Point&) { return Mat::Constant(1, 1, s0 * s0); };
  src.christoffel_oracle = [](const Point&) { return Christoffel(1); };

  SmoothMap phi;
  phi.name = "latitude";
  phi.source = src;
  phi.target = stereo_chart(2, 1.0);
  phi.map.in_dim = 1;
  phi.map.out_dim = 2;
  phi.map.eval = [r](const Vec& s) { return Vec((Vec(2) << r * std::cos(s(0)), r * std::sin(s(0))).finished()); };
  phi.map.jacobian_oracle = [r](const Vec& s) {
    return Mat((Mat(2, 1) << -r * std::sin(s(0)), r * std::cos(s(0))).finished());
  };
  phi.map.hessian_oracle = [r](const Vec& s) {
    return Hessian{{Mat::Constant(1, 1, -r * std::cos(s(0))), Mat::Constant(1, 1, -r * std::sin(s(0)))}};
  };
  return phi;
}

std::vector<ManifoldModel> builtin_charts() {
  return {euclidean(2),         euclidean(3),      stereo_chart(2, 1.0), hemisphere_chart(),
          stereo_chart(4, veronese_radius()), stereo_chart(2, 0.7), stereo_chart(4, 0.7),
          latitude_circle(M_PI / 3).source};
}

}  // namespace cgconf
