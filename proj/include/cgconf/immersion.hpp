#pragma once

// Conformality of a map φ: (M,g) → (M′,g′) and of its differential
// Φ = φ_*: (TM, h_{p,q,α}) → (TM′, h′_{r,s,β}); second fundamental forms of
// the image, optimality coefficients, and the case analysis that decides
// when Φ can be conformal.

#include "cgconf/bilinear.hpp"
#include "cgconf/smooth_map.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace cgconf {

// ---------------------------------------------------------------------------
// Base conformality
// ---------------------------------------------------------------------------

struct LambdaEstimate {
  Point x;
  double lambda = 0.0;
  /// max |entry| of g^{-1/2} (φ*g′) g^{-1/2} − λ̂ I.
  double residual = 0.0;
};

struct ConformalityTolerances {
  /// is_conformal when every residual ≤ conformal·max(1, λ̂).
  double conformal = 1e-5;
  /// is_homothety when max λ̂ − min λ̂ ≤ homothety·max(1, mean λ̂).
  double homothety = 1e-5;
};

struct ConformalityReport {
  std::vector<LambdaEstimate> lambda_estimates;
  double max_offdiag_residual = 0.0;
  double max_lambda_spread = 0.0;
  double mean_lambda = 0.0;
  bool is_conformal = false;
  bool is_homothety = false;
};

/// λ̂ at one point: tr((φ*g′) g⁻¹)/m, the least-squares fit of φ*g′ ≈ λg in
/// the g-orthonormal frame. Throws NotAnImmersionError on rank deficiency.
LambdaEstimate estimate_dilatation(const SmoothMap& phi, const Point& x, const DiffConfig& cfg = {});

ConformalityReport base_conformality(const SmoothMap& phi, std::span<const Point> samples,
                                     const DiffConfig& cfg = {}, const ConformalityTolerances& tol = {});

// ---------------------------------------------------------------------------
// Second fundamental forms (target with a Euclidean embedding)
// ---------------------------------------------------------------------------

/// First and second derivatives of F = embedding ∘ φ at a point, with an
/// orthonormal basis of the image tangent plane.
struct ImageFrame {
  Vec position;   ///< F(x)
  Mat jacobian;   ///< DF(x), ambient × source
  Hessian hessian;
  Mat tangent_basis;  ///< orthonormal columns spanning range DF(x)
};

/// Throws DomainError when the target has no embedding, NotAnImmersionError
/// when DF is rank-deficient.
ImageFrame image_frame(const SmoothMap& phi, const Point& x, const DiffConfig& cfg = {});

/// Π̄(u,v): component of D²F(u,v) normal to the image tangent plane, i.e. the
/// second fundamental form of the image in the Euclidean ambient space.
Vec ambient_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v,
                const DiffConfig& cfg = {});
Vec ambient_sff(const ImageFrame& frame, const Vec& u, const Vec& v);

/// ⟨Π̄(∂_i,∂_k), Π̄(∂_j,∂_l)⟩ in the chart basis of the source.
FormGram ambient_sff_gram(const SmoothMap& phi, const Point& x, const DiffConfig& cfg = {});

/// Relative tolerance for "image lies on Σ(ρ)".
inline constexpr double kOnSphereTol = 1e-8;

/// Throws ImageNotOnSphereError unless |F(x)| = ρ within kOnSphereTol·ρ.
void require_on_sphere(const ImageFrame& frame, double rho);

/// ⟨Π(w_a,w_b), Π(w_c,w_d)⟩ for the image inside the sphere Σ(ρ), over source
/// vectors given as the columns of `basis`:
///   ⟨Π̄(w_a,w_b),Π̄(w_c,w_d)⟩ − ρ⁻²⟨F_*w_a,F_*w_b⟩⟨F_*w_c,F_*w_d⟩.
FormGram sphere_sff_gram(const ImageFrame& frame, double rho, const Mat& basis);

/// Single entry ⟨Π(∂_i,∂_k), Π(∂_j,∂_l)⟩ in the source chart basis.
double sphere_sff_inner(const SmoothMap& phi, double rho, const Point& x, int i, int k, int j, int l,
                        const DiffConfig& cfg = {});

struct SffSample {
  Point x;
  Vec u, v;
  Vec ambient_value;  ///< Π̄(u, v)
  /// ⟨Π,Π⟩ over the source chart basis, when a sphere radius was given.
  std::optional<FormGram> in_sphere_inner_products;
};

SffSample sample_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v,
                     std::optional<double> rho = std::nullopt, const DiffConfig& cfg = {});

struct OptimalityResult {
  double C = 0.0;
  double residual = 0.0;
};

/// Best-fit coefficient C in ⟨Π(u,w),Π(v,w)⟩ = C⟨u,v⟩⟨w,w⟩ over an
/// orthonormal basis of the image tangent plane, and the largest violation at
/// that C.
OptimalityResult optimality_coefficient(const SmoothMap& phi, double rho, const Point& x,
                                        const DiffConfig& cfg = {});

/// Σ g^{ik} Π(∂_i, ∂_k) as an ambient vector, with Π = Π̄ + ρ⁻²⟨·,·⟩F the
/// in-sphere second fundamental form and g the source metric.
Vec mean_curvature(const SmoothMap& phi, double rho, const Point& x, const DiffConfig& cfg = {});

/// Π(φ_*u, φ_*v) of the image in the target, in target chart coordinates.
/// With a sphere radius the ambient route Π̄ + ρ⁻²⟨·,·⟩F is used and mapped
/// back through the target embedding; otherwise the g′-normal part of
/// D²φ(u,v) + Γ′(φ_*u, φ_*v).
Vec image_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v,
              std::optional<double> rho = std::nullopt, const DiffConfig& cfg = {});

// ---------------------------------------------------------------------------
// Bundle conformality
// ---------------------------------------------------------------------------

/// Λ(Z) = λ (1 + α|Z|²)^p / (1 + λβ(x′)|Z|²)^r.
double closed_form_bundle_dilatation(double lambda, double Z_norm2, double p, double alpha, double r,
                                     double beta);

struct BundleSample {
  Point x;
  Vec z;
  double z_norm = 0.0;          ///< |Z| in g
  double measured_ratio = 0.0;  ///< mean of h′(Φ_*A,Φ_*B)/h(A,B) over drawn pairs
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double closed_form = 0.0;  ///< Λ from the closed form
  double lambda = 0.0;       ///< λ̂(x)
  /// Extremes of the generalized eigenvalues of (Φ*h′, h): all equal iff Φ is
  /// conformal at this point of TM.
  double eigen_min = 0.0;
  double eigen_max = 0.0;
};

struct BundleConformalityOptions {
  int pairs_per_sample = 4;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  ConformalityTolerances base{};
};

struct BundleConformalityReport {
  std::vector<BundleSample> samples;
  /// max over samples and drawn pairs of |ratio − Λ| / Λ.
  double max_relative_deviation = 0.0;
  /// max over samples of (max ratio − min ratio)/mean and of the relative
  /// generalized-eigenvalue spread.
  double max_in_sample_spread = 0.0;
  /// max over samples of eigen_max − eigen_min.
  double max_eigen_spread = 0.0;
  bool lambda_is_constant_in_A = false;
  bool base_is_conformal = false;
  std::uint64_t seed = 0;
};

/// Measured ratios of h′(Φ_*A, Φ_*B) to h(A, B) at the given points of TM
/// against the closed form. `params` live on the source, `target_params` (r,s,β)
/// on the target. Pairs (A,B) are drawn from per-sample seeded streams;
/// draws with h(A,A) below 1e-12 are redrawn, and DegenerateSampleError is
/// thrown when that keeps happening.
BundleConformalityReport bundle_conformality(const SmoothMap& phi, const CGParams& params,
                                             const CGParams& target_params,
                                             std::span<const BundlePoint> samples,
                                             const DiffConfig& cfg = {},
                                             const BundleConformalityOptions& opts = {});

enum class CaseLabel { E1, E2, E3, E4, Incompatible };

std::string to_string(CaseLabel c);

struct CaseTag {
  CaseLabel tag = CaseLabel::Incompatible;
  /// λ(α − λβ) for E3, λα for E4, 0 otherwise.
  double C = 0.0;
};

struct MetricTriple {
  double p = 0.0;
  double q = 0.0;
  double alpha = 1.0;
};

/// Which of the pointwise conditions for conformal Φ holds:
///   E1  p = r = 0
///   E2  p = r ≠ 0 and λβ = α
///   E3  p = r = 1 and λβ ≠ α      (C = λ(α − λβ))
///   E4  p = 1 and r = 0           (C = λα)
/// Incompatible when q ≠ λs or none applies. Equalities use relative tolerance
/// `tol`; a λβ ≈ α tie resolves to E2.
CaseTag classify_case(const MetricTriple& source, const MetricTriple& target, double lambda,
                      double tol = 1e-9);

/// Optimality coefficient of the image implied by a case: C/λ².
double image_optimality_coefficient(const CaseTag& tag, double lambda);

// ---------------------------------------------------------------------------
// Connection-map transfer
// ---------------------------------------------------------------------------

struct KTransfer {
  Vec lhs;  ///< K′(Φ_*A), target chart coordinates
  Vec rhs;  ///< φ_*K(A) + φ_*S(v,Z) + Π(v′,Z′)
  Vec sff;  ///< Π(v′,Z′)
  double residual = 0.0;  ///< |lhs − rhs| in g′
};

/// Both sides of K′(Φ_*A) = φ_*K(A) + φ_*S(v,Z) + Π(v′,Z′), v = π_*A, for a
/// conformal φ with dilatation λ. The left side goes through the target
/// Christoffels and D²φ, the right side through the source connection, the
/// S-tensor and `image_sff`.
KTransfer k_transfer(const SmoothMap& phi, const ScalarField& lambda, const BundleTangent& A,
                     std::optional<double> rho = std::nullopt, const DiffConfig& cfg = {});

double k_transfer_residual(const SmoothMap& phi, const ScalarField& lambda, const BundleTangent& A,
                           std::optional<double> rho = std::nullopt, const DiffConfig& cfg = {});

/// |K′(Φ_*A)|′: zero exactly when Φ_* maps A to a horizontal vector.
double horizontal_defect(const SmoothMap& phi, const BundleTangent& A, const DiffConfig& cfg = {});

/// κ − (λκ′ − 2Cλ).
double gauss_relation_check(double kappa, double kappa_target, double C, double lambda);

}  // namespace cgconf
