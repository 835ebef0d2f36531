#include "cgconf/manifold.hpp"

#include <cmath>
#include <sstream>

namespace cgconf {

namespace {

constexpr double kMaxConditionNumber = 1e12;

std::string describe(const Point& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  return os.str();
}

Christoffel from_metric_partials(const Mat& g, const std::vector<Mat>& dg) {
  const int n = static_cast<int>(g.rows());
  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber)
    throw ConditioningError("metric is numerically singular");
  const Mat ginv = g.ldlt().solve(Mat::Identity(n, n));

  Christoffel G(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // first kind: Γ_lij = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
      Vec first(n);
      for (int l = 0; l < n; ++l) first(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec second = ginv * first;
      for (int k = 0; k < n; ++k) G(k, i, j) = G(k, j, i) = second(k);
    }
  return G;
}

}  // namespace

Vec Christoffel::contract(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) out(k) += (*this)(k, i, j) * u(i) * v(j);
  return out;
}

double Christoffel::max_abs_diff(const Christoffel& other) const {
  double m = 0.0;
  for (size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

ScalarField ScalarField::constant(double c) {
  ScalarField f;
  f.eval = [c](const Point&) { return c; };
  f.gradient_oracle = [](const Point& x) { return Vec::Zero(x.size()).eval(); };
  return f;
}

Vec differential(const ScalarField& f, const Point& x, const DiffConfig& cfg) {
  if (cfg.use_oracles && f.gradient_oracle) return f.gradient_oracle(x);
  return fd_gradient(f.eval, x, cfg);
}

void require_in_domain(const ManifoldModel& M, const Point& x) {
  if (x.size() != M.dim)
    throw DomainError(M.name + ": point has " + std::to_string(x.size()) + " coordinates, chart has " +
                      std::to_string(M.dim));
  if (!M.contains(x)) throw DomainError(M.name + ": point " + describe(x) + " outside chart domain");
}

Mat metric_at(const ManifoldModel& M, const Point& x) {
  require_in_domain(M, x);
  return M.metric(x);
}

double inner(const ManifoldModel& M, const Point& x, const Vec& u, const Vec& v) {
  const Mat g = metric_at(M, x);
  return 0.5 * (u.dot(g * v) + v.dot(g * u));
}

std::vector<Mat> metric_partials(const ManifoldModel& M, const Point& x, const DiffConfig& cfg) {
  cfg.validate();
  const double h = first_order_step(cfg, x);
  require_in_domain(M, x);
  for (int k = 0; k < x.size(); ++k)
    for (double s : {-h, h}) {
      Point y = x;
      y(k) += s;
      require_in_domain(M, y);
    }
  return fd_matrix_partials(M.metric, x, cfg, h);
}

Christoffel christoffel_fd(const ManifoldModel& M, const Point& x, const DiffConfig& cfg) {
  return from_metric_partials(metric_at(M, x), metric_partials(M, x, cfg));
}

Christoffel christoffel_at(const ManifoldModel& M, const Point& x, const DiffConfig& cfg) {
  if (cfg.use_oracles && M.christoffel_oracle) {
    require_in_domain(M, x);
    return M.christoffel_oracle(x);
  }
  return christoffel_fd(M, x, cfg);
}

Vec grad_scalar(const ManifoldModel& M, const ScalarField& f, const Point& x, const DiffConfig& cfg) {
  const Mat g = metric_at(M, x);
  return g.ldlt().solve(differential(f, x, cfg));
}

std::vector<Mat> riemann_at(const ManifoldModel& M, const Point& x, const DiffConfig& cfg) {
  cfg.validate();
  const int n = M.dim;
  const bool analytic = cfg.use_oracles && static_cast<bool>(M.christoffel_oracle);

  // Γ at shifted points; with finite-difference Γ the outer step is the
  // larger second-order one so inner round-off is not amplified.
  DiffConfig inner_cfg = cfg;
  inner_cfg.step.reset();
  const double h = analytic ? first_order_step(cfg, x) : second_order_step(cfg, x);
  auto gamma_at = [&](const Point& y) { return christoffel_at(M, y, inner_cfg); };

  auto diff = [&](int m, double step) {
    Point xp = x, xm = x;
    xp(m) += step;
    xm(m) -= step;
    const Christoffel gp = gamma_at(xp), gm = gamma_at(xm);
    const double dh = xp(m) - xm(m);
    Christoffel d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(k, i, j) = (gp(k, i, j) - gm(k, i, j)) / dh;
    return d;
  };

  std::vector<Christoffel> dG;  // dG[m](k,i,j) = ∂_m Γ^k_ij
  for (int m = 0; m < n; ++m) {
    Christoffel d1 = diff(m, h);
    if (cfg.richardson) {
      Christoffel d2 = diff(m, 0.5 * h);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) d1(k, i, j) = (4.0 * d2(k, i, j) - d1(k, i, j)) / 3.0;
    }
    dG.push_back(std::move(d1));
  }
  const Christoffel G = gamma_at(x);

  std::vector<Mat> R(n, Mat::Zero(n, n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = dG[i](l, j, k) - dG[j](l, i, k);
          for (int m = 0; m < n; ++m) r += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          R[l](i, j * n + k) = r;
        }
  return R;
}

double sectional_curvature(const ManifoldModel& M, const Point& x, const Vec& u, const Vec& v,
                           const DiffConfig& cfg) {
  const Mat g = metric_at(M, x);
  const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  const double gram = uu * vv - uv * uv;
  if (!(gram >= 1e-12 * uu * vv) || uu <= 0.0 || vv <= 0.0)
    throw DegenerateInputError("sectional_curvature: vectors do not span a plane");

  const int n = M.dim;
  const std::vector<Mat> R = riemann_at(M, x, cfg);
  Vec Ruvv = Vec::Zero(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) Ruvv(l) += R[l](i, j * n + k) * u(i) * v(j) * v(k);
  return u.dot(g * Ruvv) / gram;
}

Vec s_tensor(const ManifoldModel& M, const ScalarField& lambda, const Point& x, const Vec& X,
             const Vec& Y, const DiffConfig& cfg) {
  const Mat g = metric_at(M, x);
  const double lam = lambda(x);
  if (!(lam > 0.0)) throw InvalidDilatationError("dilatation must be strictly positive");
  const Vec dl = differential(lambda, x, cfg);
  const Vec grad = g.ldlt().solve(dl);
  const double Xl = dl.dot(X), Yl = dl.dot(Y);
  const double gXY = 0.5 * (X.dot(g * Y) + Y.dot(g * X));
  return (Xl * Y + Yl * X - gXY * grad) / (2.0 * lam);
}

}  // namespace cgconf
