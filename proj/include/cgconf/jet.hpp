#pragma once

// Second-order forward-mode automatic differentiation.
//
// A Jet carries a value together with its gradient and Hessian with respect to
// a small number of seed variables. Built-in charts and maps are written once
// as templates over the scalar type and evaluated either on double or on Jet;
// the latter yields exact first and second derivatives (up to rounding),
// which serve as the analytic oracles of the chart library.

#include "cgconf/types.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace cgconf {

inline constexpr int kMaxJetVars = 6;

class Jet {
 public:
  using Grad = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxJetVars, 1>;
  using Hess = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxJetVars, kMaxJetVars>;

  Jet() = default;

  /// Constant with respect to `n` variables.
  Jet(double value, int n) : v_(value), d_(Grad::Zero(n)), h_(Hess::Zero(n, n)) {}

  /// The `index`-th of `n` independent variables, at `value`.
  static Jet variable(double value, int index, int n) {
    Jet j(value, n);
    j.d_(index) = 1.0;
    return j;
  }

  double value() const { return v_; }
  const Grad& grad() const { return d_; }
  const Hess& hess() const { return h_; }
  int vars() const { return static_cast<int>(d_.size()); }

  Jet operator-() const { return Jet(-v_, -d_, -h_); }

  friend Jet operator+(const Jet& a, const Jet& b) { return Jet(a.v_ + b.v_, a.d_ + b.d_, a.h_ + b.h_); }
  friend Jet operator-(const Jet& a, const Jet& b) { return Jet(a.v_ - b.v_, a.d_ - b.d_, a.h_ - b.h_); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Hess dd = a.d_ * b.d_.transpose();
    return Jet(a.v_ * b.v_, a.v_ * b.d_ + b.v_ * a.d_,
               a.v_ * b.h_ + b.v_ * a.h_ + dd + dd.transpose());
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(const Jet& a, double s) { return Jet(a.v_ + s, a.d_, a.h_); }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return Jet(a.v_ - s, a.d_, a.h_); }
  friend Jet operator-(double s, const Jet& a) { return Jet(s - a.v_, -a.d_, -a.h_); }
  friend Jet operator*(const Jet& a, double s) { return Jet(a.v_ * s, a.d_ * s, a.h_ * s); }
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a) { return s * reciprocal(a); }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }

  /// f∘a for a scalar function with derivatives f0 = f(a), f1 = f'(a), f2 = f''(a).
  static Jet chain(const Jet& a, double f0, double f1, double f2) {
    return Jet(f0, f1 * a.d_, f1 * a.h_ + f2 * a.d_ * a.d_.transpose());
  }

  friend Jet reciprocal(const Jet& a) {
    const double r = 1.0 / a.v_;
    return chain(a, r, -r * r, 2.0 * r * r * r);
  }
  friend Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.v_);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v_));
  }
  friend Jet exp(const Jet& a) {
    const double e = std::exp(a.v_);
    return chain(a, e, e, e);
  }
  friend Jet log(const Jet& a) { return chain(a, std::log(a.v_), 1.0 / a.v_, -1.0 / (a.v_ * a.v_)); }
  friend Jet sin(const Jet& a) { return chain(a, std::sin(a.v_), std::cos(a.v_), -std::sin(a.v_)); }
  friend Jet cos(const Jet& a) { return chain(a, std::cos(a.v_), -std::sin(a.v_), -std::cos(a.v_)); }
  friend Jet pow(const Jet& a, double p) {
    const double f0 = std::pow(a.v_, p);
    return chain(a, f0, p * std::pow(a.v_, p - 1.0), p * (p - 1.0) * std::pow(a.v_, p - 2.0));
  }

 private:
  Jet(double v, Grad d, Hess h) : v_(v), d_(std::move(d)), h_(std::move(h)) {}

  double v_ = 0.0;
  Grad d_;
  Hess h_;
};

/// Scalar-type helpers so templated chart code reads the same for double and Jet.
template <class T>
T constant_like(double c, const T& like);

template <>
inline double constant_like<double>(double c, const double&) {
  return c;
}

template <>
inline Jet constant_like<Jet>(double c, const Jet& like) {
  return Jet(c, like.vars());
}

/// Value, Jacobian and Hessian of a vector function written over Jet.
struct JetResult {
  Vec value;
  Mat jacobian;
  Hessian hessian;
};

JetResult jet_derivatives(const std::function<std::vector<Jet>(const std::vector<Jet>&)>& f,
                          const Vec& x);

}  // namespace cgconf
