#include "cgconf/bilinear.hpp"

#include "cgconf/sampling.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <cmath>
#include <complex>
#include <numbers>

namespace cgconf {

SymBilinearForm::SymBilinearForm(int dim_v, int dim_w)
    : dim_v_(dim_v), dim_w_(dim_w), coeffs_(dim_w, Mat::Zero(dim_v, dim_v)) {
  if (dim_v < 1 || dim_w < 1) throw InvalidParamsError("form dimensions must be positive");
}

SymBilinearForm::SymBilinearForm(std::vector<Mat> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidParamsError("form needs at least one component");
  dim_w_ = static_cast<int>(coeffs_.size());
  dim_v_ = static_cast<int>(coeffs_.front().rows());
  for (const Mat& c : coeffs_) {
    if (c.rows() != dim_v_ || c.cols() != dim_v_) throw InvalidParamsError("form components must be square");
    if (c != c.transpose()) throw InvalidParamsError("form components must be symmetric");
  }
}

Vec SymBilinearForm::at(int i, int j) const {
  Vec w(dim_w_);
  for (int k = 0; k < dim_w_; ++k) w(k) = coeffs_[k](i, j);
  return w;
}

void SymBilinearForm::set(int i, int j, const Vec& w) {
  for (int k = 0; k < dim_w_; ++k) coeffs_[k](i, j) = coeffs_[k](j, i) = w(k);
}

Vec SymBilinearForm::operator()(const Vec& X, const Vec& Y) const {
  Vec w(dim_w_);
  for (int k = 0; k < dim_w_; ++k) w(k) = X.dot(coeffs_[k] * Y);
  return w;
}

FormGram::FormGram(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}

FormGram FormGram::of(const SymBilinearForm& B) {
  const int n = B.dim_v();
  FormGram G(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Vec a = B.at(i, k);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) G(i, k, j, l) = a.dot(B.at(j, l));
    }
  return G;
}

double FormGram::inner(const Vec& X, const Vec& Z, const Vec& Y, const Vec& W) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (X(i) == 0.0) continue;
    for (int k = 0; k < dim_; ++k) {
      if (Z(k) == 0.0) continue;
      for (int j = 0; j < dim_; ++j) {
        if (Y(j) == 0.0) continue;
        for (int l = 0; l < dim_; ++l) s += X(i) * Z(k) * Y(j) * W(l) * (*this)(i, k, j, l);
      }
    }
  }
  return s;
}

std::vector<Vec> spanning_set(int dim) {
  std::vector<Vec> S;
  for (int i = 0; i < dim; ++i) S.push_back(Vec::Unit(dim, i));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) S.push_back(Vec::Unit(dim, i) + Vec::Unit(dim, j));
  return S;
}

E1Violation e1_worst_triple(const FormGram& G, double C) {
  if (!(C >= 0.0)) throw InvalidParamsError("C must be non-negative");
  const std::vector<Vec> S = spanning_set(G.dim());
  E1Violation worst{S[0], S[0], S[0], -1.0};
  for (const Vec& X : S)
    for (const Vec& Y : S)
      for (const Vec& Z : S) {
        const double r = std::abs(G.inner(X, Z, Y, Z) - C * X.dot(Y) * Z.squaredNorm());
        if (r > worst.residual) worst = {X, Y, Z, r};
      }
  return worst;
}

double e1_residual(const FormGram& G, double C) { return e1_worst_triple(G, C).residual; }

double e1_residual(const SymBilinearForm& B, double C) { return e1_residual(FormGram::of(B), C); }

double best_fit_C(const FormGram& G) {
  const int n = G.dim();
  if (n == 1) return G(0, 0, 0, 0);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (i != k) s += G(i, k, i, k);
  return s / (n * (n - 1));
}

double best_fit_C(const SymBilinearForm& B) { return best_fit_C(FormGram::of(B)); }

double least_squares_C(const FormGram& G) {
  const std::vector<Vec> S = spanning_set(G.dim());
  double num = 0.0, den = 0.0;
  for (const Vec& X : S)
    for (const Vec& Y : S)
      for (const Vec& Z : S) {
        const double m = X.dot(Y) * Z.squaredNorm();
        num += G.inner(X, Z, Y, Z) * m;
        den += m * m;
      }
  return std::max(0.0, num / den);
}

E1Report check_e1(const SymBilinearForm& B, double tol) {
  const FormGram G = FormGram::of(B);
  E1Report r;
  r.best_fit_C = best_fit_C(G);
  r.residual = e1_residual(G, r.best_fit_C);
  r.satisfied = r.residual <= tol;
  return r;
}

SymBilinearForm complex_mult_form(double C, double theta, Branch branch, int sign) {
  if (!(C >= 0.0)) throw InvalidParamsError("C must be non-negative");
  if (sign != 1 && sign != -1) throw InvalidParamsError("sign must be +1 or -1");
  using cplx = std::complex<double>;
  const cplx w = static_cast<double>(sign) * std::sqrt(C) * std::polar(1.0, theta);
  const cplx basis[2] = {cplx(1.0, 0.0), branch == Branch::Plain ? cplx(0.0, 1.0) : cplx(0.0, -1.0)};
  SymBilinearForm B(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      const cplx v = w * (basis[i] * basis[j]);
      B.set(i, j, Vec{{v.real(), v.imag()}});
    }
  return B;
}

SymBilinearForm complex_mult_form(const ComplexFormParams& p) {
  return complex_mult_form(p.C, p.theta, p.branch, p.sign);
}

std::variant<Dim2Classification, Dim2Rejection> classify_dim2_form(const SymBilinearForm& B, double tol) {
  if (B.dim_v() != 2) throw InvalidParamsError("classify_dim2_form needs dim V = 2");
  const FormGram G = FormGram::of(B);
  const Vec xi = B.at(0, 0), eta = B.at(0, 1);
  const double C = xi.squaredNorm();
  const double scaled_tol = tol * std::max(1.0, C);

  const E1Violation worst = e1_worst_triple(G, C);
  if (worst.residual > scaled_tol) return Dim2Rejection{worst, C};

  Dim2Classification out;
  out.params.C = C;
  if (C <= scaled_tol) {
    out.basis = Mat::Identity(B.dim_w(), std::min(2, B.dim_w()));
    out.residual = worst.residual;
    return out;
  }

  // Coordinates of the form in an orthonormal basis of a plane U ⊂ W.
  Mat U;
  if (B.dim_w() == 2) {
    U = Mat::Identity(2, 2);
  } else {
    U.resize(B.dim_w(), 2);
    U.col(0) = xi / std::sqrt(C);
    U.col(1) = eta / std::sqrt(C);
  }
  SymBilinearForm B2(2, 2);
  double leak = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      const Vec coords = U.transpose() * B.at(i, j);
      leak = std::max(leak, (U * coords - B.at(i, j)).norm());
      B2.set(i, j, coords);
    }
  if (leak > std::sqrt(scaled_tol)) {
    // The image is not contained in span(ξ, η).
    return Dim2Rejection{worst, C};
  }

  using cplx = std::complex<double>;
  const cplx w(B2.at(0, 0)(0), B2.at(0, 0)(1));
  const cplx e(B2.at(0, 1)(0), B2.at(0, 1)(1));
  out.params.branch = (e * std::conj(w)).imag() >= 0.0 ? Branch::Plain : Branch::Conjugate;
  double a = std::arg(w);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= std::numbers::pi) {
    out.params.sign = -1;
    a -= std::numbers::pi;
  }
  out.params.theta = a;
  out.basis = U;

  const SymBilinearForm rebuilt = complex_mult_form(out.params);
  double recon = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) recon = std::max(recon, (rebuilt.at(i, j) - B2.at(i, j)).norm());
  out.residual = std::max(worst.residual, recon);
  return out;
}

Dim3Certificate dim_ge3_certificate(const SymBilinearForm& B, double tol) {
  if (B.dim_v() < 3) throw InvalidParamsError("dim_ge3_certificate needs dim V >= 3");
  const FormGram G = FormGram::of(B);
  Dim3Certificate c;
  c.best_C = best_fit_C(G);
  c.residual_at_best_C = e1_residual(G, c.best_C);
  const Vec xi = B.at(0, 0), zeta = B.at(1, 1), eta = B.at(2, 2);
  c.chain = {(xi + zeta).norm(), (zeta + eta).norm(), (eta + xi).norm(), xi.squaredNorm() - c.best_C};
  c.consistent_with_vanishing = !(c.residual_at_best_C <= tol && c.best_C > tol);
  return c;
}

namespace {

// Residuals r(X,Y,Z) = ⟨B(X,Z),B(Y,Z)⟩ − C⟨X,Y⟩|Z|² over basis X ≤ Y and
// spanning Z, as functions of the upper-triangular entries of each B_k.
struct E1Functor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  int n, w;
  double C;
  std::vector<std::pair<int, int>> entries;
  std::vector<std::array<int, 2>> xy;
  std::vector<Vec> zs;

  E1Functor(int n_, int w_, double C_) : n(n_), w(w_), C(C_) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) entries.emplace_back(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) xy.push_back({i, j});
    zs = spanning_set(n);
  }

  int inputs() const { return w * static_cast<int>(entries.size()); }
  int values() const { return static_cast<int>(xy.size() * zs.size()); }

  std::vector<Mat> unpack(const Vec& p) const {
    std::vector<Mat> B(w, Mat::Zero(n, n));
    int idx = 0;
    for (int k = 0; k < w; ++k)
      for (auto [i, j] : entries) B[k](i, j) = B[k](j, i) = p(idx++);
    return B;
  }

  int operator()(const Vec& p, Vec& f) const {
    const std::vector<Mat> B = unpack(p);
    int r = 0;
    for (const auto& [a, b] : xy)
      for (const Vec& Z : zs) {
        double s = 0.0;
        for (int k = 0; k < w; ++k) s += B[k].row(a).dot(Z) * B[k].row(b).dot(Z);
        f(r++) = s - C * (a == b ? 1.0 : 0.0) * Z.squaredNorm();
      }
    return 0;
  }

  int df(const Vec& p, Mat& J) const {
    const std::vector<Mat> B = unpack(p);
    J.setZero(values(), inputs());
    int r = 0;
    for (const auto& [a, b] : xy)
      for (const Vec& Z : zs) {
        int col = 0;
        for (int k = 0; k < w; ++k) {
          const double bx = B[k].row(a).dot(Z), by = B[k].row(b).dot(Z);
          for (auto [i, j] : entries) {
            // ∂B_k(e_a, Z)/∂b_ij for the symmetric pair (i,j).
            auto dB = [&](int row) {
              double d = 0.0;
              if (row == i) d += Z(j);
              if (row == j && i != j) d += Z(i);
              return d;
            };
            J(r, col++) = dB(a) * by + bx * dB(b);
          }
        }
        ++r;
      }
    return 0;
  }
};

}  // namespace

E1SearchResult search_e1_minimum(int dim_v, int dim_w, double C, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw InvalidParamsError("restarts must be positive");
  E1Functor functor(dim_v, dim_w, C);
  E1SearchResult best;
  best.best_residual = std::numeric_limits<double>::infinity();
  best.restarts = restarts;
  best.seed = seed;

  for (int r = 0; r < restarts; ++r) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(r));
    Vec p = gaussian_vec(rng, functor.inputs());
    p /= p.norm();
    Eigen::LevenbergMarquardt<E1Functor> lm(functor);
    lm.parameters.maxfev = 2000;
    lm.minimize(p);

    SymBilinearForm B(functor.unpack(p));
    const double res = e1_residual(B, C);
    if (res < best.best_residual) {
      best.best_residual = res;
      best.best_form = std::move(B);
    }
  }
  return best;
}

}  // namespace cgconf
