#include "cgconf/immersion.hpp"

#include "cgconf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cgconf {

namespace {

constexpr double kRankTol = 1e-10;

bool rel_eq(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

// ---------------------------------------------------------------------------

LambdaEstimate estimate_dilatation(const SmoothMap& phi, const Point& x, const DiffConfig& cfg) {
  const Mat J = map_jacobian(phi, x, cfg);
  const Point y = phi.map.eval(x);
  const Mat gp = metric_at(phi.target, y);
  const Mat g = metric_at(phi.source, x);
  const Mat P = J.transpose() * gp * J;

  const Eigen::LLT<Mat> llt(g);
  const Mat L = llt.matrixL();
  const Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(g.rows(), g.cols()));
  Mat A = Linv * P * Linv.transpose();
  A = 0.5 * (A + A.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eig(A, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, hi)))
    throw NotAnImmersionError(phi.name + ": differential is rank-deficient");

  const int m = static_cast<int>(A.rows());
  LambdaEstimate est;
  est.x = x;
  est.lambda = A.trace() / m;
  est.residual = (A - est.lambda * Mat::Identity(m, m)).cwiseAbs().maxCoeff();
  return est;
}

ConformalityReport base_conformality(const SmoothMap& phi, std::span<const Point> samples,
                                     const DiffConfig& cfg, const ConformalityTolerances& tol) {
  ConformalityReport rep;
  if (samples.empty()) return rep;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  bool conformal = true;
  for (const Point& x : samples) {
    LambdaEstimate e = estimate_dilatation(phi, x, cfg);
    rep.max_offdiag_residual = std::max(rep.max_offdiag_residual, e.residual);
    conformal = conformal && e.residual <= tol.conformal * std::max(1.0, e.lambda);
    lo = std::min(lo, e.lambda);
    hi = std::max(hi, e.lambda);
    sum += e.lambda;
    rep.lambda_estimates.push_back(std::move(e));
  }
  rep.mean_lambda = sum / static_cast<double>(samples.size());
  rep.max_lambda_spread = hi - lo;
  rep.is_conformal = conformal;
  rep.is_homothety = conformal && rep.max_lambda_spread <= tol.homothety * std::max(1.0, rep.mean_lambda);
  return rep;
}

// ---------------------------------------------------------------------------

ImageFrame image_frame(const SmoothMap& phi, const Point& x, const DiffConfig& cfg) {
  if (!phi.target.embedding) throw DomainError(phi.target.name + ": target has no Euclidean embedding");
  const ChartMap& E = *phi.target.embedding;
  const Mat Jp = map_jacobian(phi, x, cfg);
  const Hessian Hp = map_hessian(phi, x, cfg);
  const Point y = phi.map.eval(x);
  require_in_domain(phi.target, y);
  const Mat JE = jacobian(E, y, cfg);
  const Hessian HE = hessian(E, y, cfg);

  ImageFrame f;
  f.position = E.eval(y);
  f.jacobian = JE * Jp;
  for (int a = 0; a < E.out_dim; ++a) {
    Mat c = Jp.transpose() * HE.comps[a] * Jp;
    for (int b = 0; b < phi.target.dim; ++b) c += JE(a, b) * Hp.comps[b];
    f.hessian.comps.push_back(0.5 * (c + c.transpose()));
  }

  Eigen::JacobiSVD<Mat> svd(f.jacobian, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const int m = phi.source.dim;
  if (sv.size() < m || !(sv(m - 1) > kRankTol * std::max(1.0, sv(0))))
    throw NotAnImmersionError(phi.name + ": composite embedding is rank-deficient");
  f.tangent_basis = svd.matrixU().leftCols(m);
  return f;
}

Vec ambient_sff(const ImageFrame& frame, const Vec& u, const Vec& v) {
  const Vec h = frame.hessian.apply(u, v);
  const Mat& Q = frame.tangent_basis;
  return h - Q * (Q.transpose() * h);
}

Vec ambient_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v, const DiffConfig& cfg) {
  return ambient_sff(image_frame(phi, x, cfg), u, v);
}

FormGram ambient_sff_gram(const SmoothMap& phi, const Point& x, const DiffConfig& cfg) {
  const ImageFrame f = image_frame(phi, x, cfg);
  const int m = phi.source.dim;
  std::vector<Vec> P(m * m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) P[i * m + k] = ambient_sff(f, Vec::Unit(m, i), Vec::Unit(m, k));
  FormGram G(m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) G(i, k, j, l) = P[i * m + k].dot(P[j * m + l]);
  return G;
}

void require_on_sphere(const ImageFrame& frame, double rho) {
  if (!(rho > 0.0)) throw InvalidParamsError("sphere radius must be positive");
  if (std::abs(frame.position.norm() - rho) > kOnSphereTol * rho)
    throw ImageNotOnSphereError("image point does not lie on the sphere of the given radius");
}

FormGram sphere_sff_gram(const ImageFrame& frame, double rho, const Mat& basis) {
  require_on_sphere(frame, rho);
  const int n = static_cast<int>(basis.cols());
  const Mat T = frame.jacobian * basis;  // pushed-forward basis
  std::vector<Vec> P(n * n);
  Mat t(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      P[a * n + b] = ambient_sff(frame, basis.col(a), basis.col(b));
      t(a, b) = 0.5 * (T.col(a).dot(T.col(b)) + T.col(b).dot(T.col(a)));
    }
  const double inv_r2 = 1.0 / (rho * rho);
  FormGram G(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          G(a, b, c, d) = P[a * n + b].dot(P[c * n + d]) - inv_r2 * t(a, b) * t(c, d);
  return G;
}

double sphere_sff_inner(const SmoothMap& phi, double rho, const Point& x, int i, int k, int j, int l,
                        const DiffConfig& cfg) {
  const int m = phi.source.dim;
  const FormGram G = sphere_sff_gram(image_frame(phi, x, cfg), rho, Mat::Identity(m, m));
  return G(i, k, j, l);
}

SffSample sample_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v,
                     std::optional<double> rho, const DiffConfig& cfg) {
  const ImageFrame f = image_frame(phi, x, cfg);
  SffSample s{x, u, v, ambient_sff(f, u, v), std::nullopt};
  if (rho) s.in_sphere_inner_products = sphere_sff_gram(f, *rho, Mat::Identity(phi.source.dim, phi.source.dim));
  return s;
}

OptimalityResult optimality_coefficient(const SmoothMap& phi, double rho, const Point& x,
                                        const DiffConfig& cfg) {
  const ImageFrame f = image_frame(phi, x, cfg);
  const Mat induced = f.jacobian.transpose() * f.jacobian;
  const int m = static_cast<int>(induced.rows());
  const Mat L = Eigen::LLT<Mat>(induced).matrixL();
  // Columns of L⁻ᵀ are orthonormal for the induced metric.
  const Mat W = L.transpose().triangularView<Eigen::Upper>().solve(Mat::Identity(m, m));
  const FormGram G = sphere_sff_gram(f, rho, W);
  OptimalityResult r;
  r.C = least_squares_C(G);
  r.residual = e1_residual(G, r.C);
  return r;
}

Vec mean_curvature(const SmoothMap& phi, double rho, const Point& x, const DiffConfig& cfg) {
  const ImageFrame f = image_frame(phi, x, cfg);
  require_on_sphere(f, rho);
  const Mat g = metric_at(phi.source, x);
  const int m = static_cast<int>(g.rows());
  const Mat ginv = g.ldlt().solve(Mat::Identity(m, m));
  Vec H = Vec::Zero(f.position.size());
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      const Vec ei = Vec::Unit(m, i), ek = Vec::Unit(m, k);
      const double t = (f.jacobian * ei).dot(f.jacobian * ek);
      H += ginv(i, k) * (ambient_sff(f, ei, ek) + (t / (rho * rho)) * f.position);
    }
  return H;
}

Vec image_sff(const SmoothMap& phi, const Point& x, const Vec& u, const Vec& v, std::optional<double> rho,
              const DiffConfig& cfg) {
  const Point y = phi.map.eval(x);
  if (rho) {
    const ImageFrame f = image_frame(phi, x, cfg);
    require_on_sphere(f, *rho);
    const double t = (f.jacobian * u).dot(f.jacobian * v);
    const Vec pi_amb = ambient_sff(f, u, v) + (t / (*rho * *rho)) * f.position;
    const Mat JE = jacobian(*phi.target.embedding, y, cfg);
    return JE.colPivHouseholderQr().solve(pi_amb);
  }
  const Mat J = map_jacobian(phi, x, cfg);
  const Hessian H = map_hessian(phi, x, cfg);
  const Christoffel Gp = christoffel_at(phi.target, y, cfg);
  const Mat gp = metric_at(phi.target, y);
  const Vec a = H.apply(u, v) + Gp.contract(J * u, J * v);
  const Mat JtG = J.transpose() * gp;
  const Vec tangential = J * (JtG * J).ldlt().solve(JtG * a);
  return a - tangential;
}

// ---------------------------------------------------------------------------

double closed_form_bundle_dilatation(double lambda, double Z_norm2, double p, double alpha, double r,
                                     double beta) {
  return lambda * std::pow(1.0 + alpha * Z_norm2, p) / std::pow(1.0 + lambda * beta * Z_norm2, r);
}

BundleConformalityReport bundle_conformality(const SmoothMap& phi, const CGParams& params,
                                             const CGParams& target_params,
                                             std::span<const BundlePoint> samples, const DiffConfig& cfg,
                                             const BundleConformalityOptions& opts) {
  BundleConformalityReport rep;
  rep.seed = opts.seed;
  rep.base_is_conformal = true;
  const int m = phi.source.dim;

  for (size_t s = 0; s < samples.size(); ++s) {
    const BundlePoint& at = samples[s];
    const Point& x = at.x;
    const LambdaEstimate est = estimate_dilatation(phi, x, cfg);
    rep.base_is_conformal =
        rep.base_is_conformal && est.residual <= opts.base.conformal * std::max(1.0, est.lambda);

    const Point y = phi.map.eval(x);
    params.validate_at(x);
    target_params.validate_at(y);
    const Mat g = metric_at(phi.source, x);
    const double z2 = at.z.dot(g * at.z);

    BundleSample out;
    out.x = x;
    out.z = at.z;
    out.z_norm = std::sqrt(z2);
    out.lambda = est.lambda;
    out.closed_form = closed_form_bundle_dilatation(est.lambda, z2, params.p(x), params.alpha(x),
                                                    target_params.p(y), target_params.alpha(y));

    // Generalized eigenvalues of the pulled-back bundle metric.
    const Mat hs = cg_metric_matrix_coordinates(phi.source, params, at, cfg);
    const Mat D = bundle_differential_matrix(phi, at, cfg);
    const BundlePoint image{y, map_jacobian(phi, x, cfg) * at.z};
    const Mat ht = cg_metric_matrix_coordinates(phi.target, target_params, image, cfg);
    const Mat pulled = D.transpose() * ht * D;
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(0.5 * (pulled + pulled.transpose()),
                                                      0.5 * (hs + hs.transpose()), Eigen::EigenvaluesOnly);
    out.eigen_min = ges.eigenvalues().minCoeff();
    out.eigen_max = ges.eigenvalues().maxCoeff();

    // Ratios over random pairs, through Φ_* and h directly.
    auto rng = stream_rng(opts.seed, s);
    auto draw = [&]() {
      for (int attempt = 0; attempt < 8; ++attempt) {
        BundleTangent A{at, gaussian_vec(rng, m), gaussian_vec(rng, m)};
        if (cg_metric_eval(phi.source, params, A, A, cfg) >= 1e-12) return A;
      }
      throw DegenerateSampleError("h(A,A) stays below tolerance");
    };
    std::vector<double> ratios;
    for (int k = 0; k < opts.pairs_per_sample; ++k) {
      const BundleTangent A = draw(), B = draw();
      const BundleTangent PA = bundle_differential(phi, A, cfg), PB = bundle_differential(phi, B, cfg);
      const double hAA = cg_metric_eval(phi.source, params, A, A, cfg);
      const double hBB = cg_metric_eval(phi.source, params, B, B, cfg);
      const double hAB = cg_metric_eval(phi.source, params, A, B, cfg);
      ratios.push_back(cg_metric_eval(phi.target, target_params, PA, PA, cfg) / hAA);
      ratios.push_back(cg_metric_eval(phi.target, target_params, PB, PB, cfg) / hBB);
      if (std::abs(hAB) >= 0.1 * std::sqrt(hAA * hBB))
        ratios.push_back(cg_metric_eval(phi.target, target_params, PA, PB, cfg) / hAB);
    }
    double sum = 0.0;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = -out.min_ratio;
    for (double r : ratios) {
      sum += r;
      out.min_ratio = std::min(out.min_ratio, r);
      out.max_ratio = std::max(out.max_ratio, r);
      rep.max_relative_deviation =
          std::max(rep.max_relative_deviation, std::abs(r - out.closed_form) / out.closed_form);
    }
    out.measured_ratio = sum / static_cast<double>(ratios.size());

    const double ratio_spread = (out.max_ratio - out.min_ratio) / std::abs(out.measured_ratio);
    const double eigen_spread = (out.eigen_max - out.eigen_min) / std::abs(out.eigen_max);
    rep.max_in_sample_spread = std::max({rep.max_in_sample_spread, ratio_spread, eigen_spread});
    rep.max_eigen_spread = std::max(rep.max_eigen_spread, out.eigen_max - out.eigen_min);
    rep.samples.push_back(std::move(out));
  }
  rep.lambda_is_constant_in_A = rep.max_in_sample_spread <= opts.tol;
  return rep;
}

std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::E1: return "E1";
    case CaseLabel::E2: return "E2";
    case CaseLabel::E3: return "E3";
    case CaseLabel::E4: return "E4";
    case CaseLabel::Incompatible: return "INCOMPATIBLE";
  }
  return "?";
}

CaseTag classify_case(const MetricTriple& src, const MetricTriple& tgt, double lambda, double tol) {
  if (!(lambda > 0.0)) throw InvalidParamsError("classify_case: lambda must be positive");
  if (!(src.alpha > 0.0) || !(tgt.alpha > 0.0)) throw InvalidParamsError("classify_case: alpha, beta must be positive");
  if (!(src.q >= 0.0) || !(tgt.q >= 0.0)) throw InvalidParamsError("classify_case: q, s must be non-negative");

  const double p = src.p, alpha = src.alpha, r = tgt.p, beta = tgt.alpha;
  if (!rel_eq(src.q, lambda * tgt.q, tol)) return {CaseLabel::Incompatible, 0.0};

  const bool p0 = rel_eq(p, 0.0, tol), r0 = rel_eq(r, 0.0, tol);
  const bool p1 = rel_eq(p, 1.0, tol), r1 = rel_eq(r, 1.0, tol);
  const bool balanced = rel_eq(lambda * beta, alpha, tol);

  if (p0 && r0) return {CaseLabel::E1, 0.0};
  if (rel_eq(p, r, tol) && balanced) return {CaseLabel::E2, 0.0};
  if (p1 && r1) return {CaseLabel::E3, lambda * (alpha - lambda * beta)};
  if (p1 && r0) return {CaseLabel::E4, lambda * alpha};
  return {CaseLabel::Incompatible, 0.0};
}

double image_optimality_coefficient(const CaseTag& tag, double lambda) { return tag.C / (lambda * lambda); }

// ---------------------------------------------------------------------------

KTransfer k_transfer(const SmoothMap& phi, const ScalarField& lambda, const BundleTangent& A,
                     std::optional<double> rho, const DiffConfig& cfg) {
  const Point& x = A.base.x;
  const Vec& Z = A.base.z;
  const Vec& v = A.xdot;

  KTransfer k;
  const BundleTangent PA = bundle_differential(phi, A, cfg);
  k.lhs = connection_map(phi.target, PA, cfg);

  const Mat J = map_jacobian(phi, x, cfg);
  const Vec KA = connection_map(phi.source, A, cfg);
  const Vec S = s_tensor(phi.source, lambda, x, v, Z, cfg);
  k.sff = image_sff(phi, x, v, Z, rho, cfg);
  k.rhs = J * (KA + S) + k.sff;

  const Vec d = k.lhs - k.rhs;
  const Mat gp = metric_at(phi.target, PA.base.x);
  k.residual = std::sqrt(std::max(0.0, d.dot(gp * d)));
  return k;
}

double k_transfer_residual(const SmoothMap& phi, const ScalarField& lambda, const BundleTangent& A,
                           std::optional<double> rho, const DiffConfig& cfg) {
  return k_transfer(phi, lambda, A, rho, cfg).residual;
}

double horizontal_defect(const SmoothMap& phi, const BundleTangent& A, const DiffConfig& cfg) {
  const BundleTangent PA = bundle_differential(phi, A, cfg);
  const Vec K = connection_map(phi.target, PA, cfg);
  const Mat gp = metric_at(phi.target, PA.base.x);
  return std::sqrt(std::max(0.0, K.dot(gp * K)));
}

double gauss_relation_check(double kappa, double kappa_target, double C, double lambda) {
  return kappa - (lambda * kappa_target - 2.0 * C * lambda);
}

}  // namespace cgconf
