#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace cgconf {

/// Chart coordinates of a point.
using Point = Eigen::VectorXd;
/// Components of a tangent vector in the coordinate frame of a chart.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Second derivatives of a vector-valued map: one symmetric n×n block per
/// output component.
struct Hessian {
  std::vector<Mat> comps;

  int out_dim() const { return static_cast<int>(comps.size()); }
  int in_dim() const { return comps.empty() ? 0 : static_cast<int>(comps.front().rows()); }

  /// The vector with components uᵀ·comps[a]·v, evaluated symmetrically so
  /// that apply(u, v) == apply(v, u) bit for bit.
  Vec apply(const Vec& u, const Vec& v) const {
    Vec out(out_dim());
    for (int a = 0; a < out_dim(); ++a) out(a) = 0.5 * (u.dot(comps[a] * v) + v.dot(comps[a] * u));
    return out;
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class InvalidDilatationError : public Error {
 public:
  using Error::Error;
};

class InvalidPairError : public Error {
 public:
  using Error::Error;
};

class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

class NotAnImmersionError : public Error {
 public:
  using Error::Error;
};

class ImageNotOnSphereError : public Error {
 public:
  using Error::Error;
};

class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace cgconf
