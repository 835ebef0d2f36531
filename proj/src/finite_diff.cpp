#include "cgconf/finite_diff.hpp"

#include <cmath>
#include <limits>

namespace cgconf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double scale_of(const Vec& x) { return std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0); }

template <class F, class T>
T central(const F& f, const Vec& x, int k, double h) {
  Vec xp = x, xm = x;
  xp(k) += h;
  xm(k) -= h;
  // Use the representable step actually taken.
  const double dh = xp(k) - xm(k);
  return (f(xp) - f(xm)) / dh;
}

template <class F, class T>
T central_maybe_richardson(const F& f, const Vec& x, int k, double h, bool richardson) {
  T d1 = central<F, T>(f, x, k, h);
  if (!richardson) return d1;
  T d2 = central<F, T>(f, x, k, 0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

void DiffConfig::validate() const {
  if (step && !(*step > 0.0)) throw InvalidParamsError("finite-difference step must be positive");
  if (!(tol_derivative > 0.0)) throw InvalidParamsError("tol_derivative must be positive");
}

double first_order_step(const DiffConfig& cfg, const Vec& x) {
  if (cfg.step) return *cfg.step;
  return std::cbrt(kEps) * scale_of(x);
}

double second_order_step(const DiffConfig& cfg, const Vec& x) {
  if (cfg.step) return *cfg.step;
  return std::pow(kEps, 0.25) * scale_of(x);
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, const DiffConfig& cfg) {
  const double h = first_order_step(cfg, x);
  Mat J;
  for (int k = 0; k < x.size(); ++k) {
    Vec col = central_maybe_richardson<decltype(f), Vec>(f, x, k, h, cfg.richardson);
    if (k == 0) J.resize(col.size(), x.size());
    J.col(k) = col;
  }
  return J;
}

std::vector<Mat> fd_matrix_partials(const std::function<Mat(const Vec&)>& f, const Vec& x,
                                    const DiffConfig& cfg, double step) {
  std::vector<Mat> out;
  out.reserve(x.size());
  for (int k = 0; k < x.size(); ++k)
    out.push_back(central_maybe_richardson<decltype(f), Mat>(f, x, k, step, cfg.richardson));
  return out;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, const DiffConfig& cfg) {
  const double h = first_order_step(cfg, x);
  Vec g(x.size());
  for (int k = 0; k < x.size(); ++k)
    g(k) = central_maybe_richardson<decltype(f), double>(f, x, k, h, cfg.richardson);
  return g;
}

Mat jacobian(const ChartMap& f, const Vec& x, const DiffConfig& cfg) {
  if (cfg.use_oracles && f.jacobian_oracle) return f.jacobian_oracle(x);
  return fd_jacobian(f.eval, x, cfg);
}

Hessian hessian(const ChartMap& f, const Vec& x, const DiffConfig& cfg) {
  if (cfg.use_oracles && f.hessian_oracle) return f.hessian_oracle(x);

  const bool exact_jacobian = cfg.use_oracles && static_cast<bool>(f.jacobian_oracle);
  const double h = exact_jacobian ? first_order_step(cfg, x) : second_order_step(cfg, x);
  std::function<Mat(const Vec&)> jac = [&](const Vec& y) { return jacobian(f, y, cfg); };
  if (!exact_jacobian) {
    // Inner differences use the first-order step; the outer one is larger.
    DiffConfig inner = cfg;
    inner.step.reset();
    jac = [&f, inner](const Vec& y) { return fd_jacobian(f.eval, y, inner); };
  }
  std::vector<Mat> dJ = fd_matrix_partials(jac, x, cfg, h);

  const int m = static_cast<int>(dJ.front().rows());
  const int n = static_cast<int>(x.size());
  Hessian H;
  H.comps.assign(m, Mat::Zero(n, n));
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H.comps[a](i, j) = dJ[j](a, i);
  for (auto& c : H.comps) c = 0.5 * (c + c.transpose()).eval();
  return H;
}

ChartMap compose(const ChartMap& f, const ChartMap& g, const DiffConfig& cfg) {
  ChartMap out;
  out.in_dim = f.in_dim;
  out.out_dim = g.out_dim;
  out.eval = [f, g](const Vec& x) { return g.eval(f.eval(x)); };
  out.jacobian_oracle = [f, g, cfg](const Vec& x) {
    return (jacobian(g, f.eval(x), cfg) * jacobian(f, x, cfg)).eval();
  };
  out.hessian_oracle = [f, g, cfg](const Vec& x) {
    const Vec y = f.eval(x);
    const Mat Jf = jacobian(f, x, cfg);
    const Mat Jg = jacobian(g, y, cfg);
    const Hessian Hf = hessian(f, x, cfg);
    const Hessian Hg = hessian(g, y, cfg);
    Hessian H;
    for (int a = 0; a < g.out_dim; ++a) {
      Mat c = Jf.transpose() * Hg.comps[a] * Jf;
      for (int b = 0; b < f.out_dim; ++b) c += Jg(a, b) * Hf.comps[b];
      H.comps.push_back(c);
    }
    return H;
  };
  return out;
}

}  // namespace cgconf
