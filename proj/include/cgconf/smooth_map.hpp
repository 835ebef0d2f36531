#pragma once

#include "cgconf/manifold.hpp"
#include "cgconf/tangent_bundle.hpp"

#include <string>

namespace cgconf {

/// A smooth map between two charted manifolds, expressed chart to chart.
struct SmoothMap {
  std::string name;
  ManifoldModel source;
  ManifoldModel target;
  ChartMap map;
  /// Declared immersion; analyses that need full rank check it at each point.
  bool immersion = true;

  Point operator()(const Point& x) const;
};

SmoothMap identity_map(const ManifoldModel& M);

/// Linear map x ↦ L x between two models.
SmoothMap linear_map(const ManifoldModel& source, const ManifoldModel& target, const Mat& L);

/// second ∘ first.
SmoothMap compose(const SmoothMap& first, const SmoothMap& second);

Mat map_jacobian(const SmoothMap& phi, const Point& x, const DiffConfig& cfg = {});
Hessian map_hessian(const SmoothMap& phi, const Point& x, const DiffConfig& cfg = {});

/// φ_* v at x.
Vec pushforward(const SmoothMap& phi, const Point& x, const Vec& v, const DiffConfig& cfg = {});

/// Φ_* for Φ = φ_*: TM → TM′. In chart velocities
///   (x, Z, ẋ, Ż) ↦ (φ(x), φ_*Z, φ_*ẋ, D²φ(ẋ, Z) + φ_*Ż).
BundleTangent bundle_differential(const SmoothMap& phi, const BundleTangent& A,
                                  const DiffConfig& cfg = {});

/// Matrix of Φ_* acting on raw chart velocities (ẋ, Ż) at the bundle point.
Mat bundle_differential_matrix(const SmoothMap& phi, const BundlePoint& at, const DiffConfig& cfg = {});

}  // namespace cgconf
