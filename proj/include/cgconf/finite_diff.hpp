#pragma once

// Central finite differences and the map-with-derivatives abstraction shared by
// embeddings and smooth maps.
//
// Step selection balances truncation against round-off:
//   first derivatives   h = cbrt(eps)    * max(1, |x|_inf)
//   second derivatives  h = eps^(1/4)    * max(1, |x|_inf)
// One level of Richardson extrapolation, (4 D(h/2) - D(h)) / 3, is optional.

#include "cgconf/types.hpp"

#include <functional>
#include <optional>

namespace cgconf {

struct DiffConfig {
  /// Fixed finite-difference step; automatic scaling when empty.
  std::optional<double> step;
  bool richardson = false;
  double tol_derivative = 1e-6;
  /// When false every analytic oracle is ignored and finite differences are
  /// used throughout. Cross-checks run one route against the other.
  bool use_oracles = true;

  /// Throws InvalidParamsError for a non-positive step or tolerance.
  void validate() const;

  DiffConfig without_oracles() const {
    DiffConfig c = *this;
    c.use_oracles = false;
    return c;
  }
};

double first_order_step(const DiffConfig& cfg, const Vec& x);
double second_order_step(const DiffConfig& cfg, const Vec& x);

/// Partial derivatives of a vector-valued function, one column per input
/// coordinate.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, const DiffConfig& cfg);

/// Directional derivatives of a matrix-valued function along each coordinate
/// axis.
std::vector<Mat> fd_matrix_partials(const std::function<Mat(const Vec&)>& f, const Vec& x,
                                    const DiffConfig& cfg, double step);

/// Gradient (coordinate partials) of a scalar function.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, const DiffConfig& cfg);

/// A map between open subsets of coordinate spaces, with optional analytic
/// derivative oracles.
struct ChartMap {
  int in_dim = 0;
  int out_dim = 0;
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jacobian_oracle;
  std::function<Hessian(const Vec&)> hessian_oracle;

  Vec operator()(const Vec& x) const { return eval(x); }
};

Mat jacobian(const ChartMap& f, const Vec& x, const DiffConfig& cfg);

/// Second derivatives. Without a Hessian oracle the Jacobian (oracle or
/// finite difference) is differentiated once more; the result is symmetrized.
Hessian hessian(const ChartMap& f, const Vec& x, const DiffConfig& cfg);

/// g ∘ f with chain-rule derivatives assembled from whatever each factor
/// provides.
ChartMap compose(const ChartMap& f, const ChartMap& g, const DiffConfig& cfg = {});

}  // namespace cgconf
