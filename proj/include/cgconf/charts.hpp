#pragma once

// Built-in models and maps: Euclidean spaces, stereographic charts of round
// spheres, the lower-hemisphere chart of Σ²(1), the Veronese map into
// Σ⁴(1/√3), the equator inclusion Σ²(ρ) → Σ⁴(ρ) and a latitude circle.
//
// Stereographic charts project from the north pole (0, …, 0, ρ):
//   X(y) = (2ρ²y, ρ(|y|² − ρ²)) / (|y|² + ρ²),   g = 4ρ⁴/(|y|² + ρ²)² δ,
// so the chart origin is the south pole. Derivative oracles of embeddings and
// maps come from second-order jets.

#include "cgconf/smooth_map.hpp"

namespace cgconf {

/// ℝⁿ with the flat metric, embedded in itself by the identity.
ManifoldModel euclidean(int n);

/// Σ^d(ρ) ⊂ ℝ^{d+1} in the stereographic chart above.
ManifoldModel stereo_chart(int d, double rho);

/// The chart of stereo_chart(2, 1) restricted to |t| < 1: the open lower
/// hemisphere Σ²₋(1).
ManifoldModel hemisphere_chart();

/// Radius of the sphere that contains the Veronese surface.
double veronese_radius();

/// u(x) = (x₂x₃, x₁x₃, x₁x₂, ½(x₁²−x₂²), (√3/6)(x₁²+x₂²−2x₃²)). Throws
/// DomainError unless |x| = 1 within 1e-9.
Vec veronese(const Vec& x);

/// The Veronese immersion hemisphere_chart() → stereo_chart(4, 1/√3), chart to
/// chart. The projection pole (0,0,0,0,1/√3) is never attained since
/// u₅ ≤ √3/6 on the unit sphere.
SmoothMap veronese_map();

/// y ↦ (y₁, y₂, 0, 0): the totally geodesic isometric inclusion of Σ²(ρ) as
/// the equator of Σ⁴(ρ), in stereographic charts.
SmoothMap equator_inclusion(double rho);

/// The circle of colatitude θ₀ on Σ²(1), parametrized by arc angle s with
/// source metric sin²θ₀ ds² (the induced one). |H| = |cot θ₀|.
SmoothMap latitude_circle(double theta0);

/// Every built-in chart, for self-checks of the differentiation engine.
std::vector<ManifoldModel> builtin_charts();

}  // namespace cgconf
