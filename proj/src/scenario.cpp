#include "cgconf/scenario.hpp"

#include "cgconf/bilinear.hpp"
#include "cgconf/charts.hpp"
#include "cgconf/immersion.hpp"
#include "cgconf/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

namespace cgconf {

void ScenarioConfig::validate() const {
  if (samples < 1) throw UsageError("samples must be at least 1");
  if (tol && !(*tol > 0.0)) throw UsageError("tol must be positive");
}

const CheckRecord* ReportDocument::find(const std::string& check_name) const {
  for (const CheckRecord& c : checks)
    if (c.name == check_name) return &c;
  return nullptr;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Checks {
 public:
  explicit Checks(std::optional<double> tol_override) : override_(tol_override) {}

  void at_most(const std::string& name, double expected, double measured, double residual, double tol,
               std::string detail = {}) {
    const double t = override_.value_or(tol);
    records_.push_back({name, expected, measured, residual, t, Relation::AtMost, residual <= t, std::move(detail)});
  }

  /// |measured − expected| ≤ tol.
  void close(const std::string& name, double expected, double measured, double tol, std::string detail = {}) {
    at_most(name, expected, measured, std::abs(measured - expected), tol, std::move(detail));
  }

  void at_least(const std::string& name, double threshold, double measured, std::string detail = {}) {
    records_.push_back({name, threshold, measured, std::max(0.0, threshold - measured), threshold,
                        Relation::AtLeast, measured >= threshold, std::move(detail)});
  }

  /// Exact agreement of two labels.
  void label(const std::string& name, const std::string& expected, const std::string& measured) {
    const bool ok = expected == measured;
    records_.push_back({name, 0.0, ok ? 0.0 : 1.0, ok ? 0.0 : 1.0, 0.0, Relation::AtMost, ok,
                        "expected " + expected + ", got " + measured});
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

 private:
  std::optional<double> override_;
  std::vector<CheckRecord> records_;
};

class Params {
 public:
  Params(const std::map<std::string, std::string>& raw, const std::vector<std::string>& allowed) : raw_(raw) {
    for (const auto& [k, v] : raw)
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        throw UsageError("unknown parameter '" + k + "'");
  }

  double number(const std::string& key, double fallback) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    try {
      size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw UsageError("parameter '" + key + "' must be a number, got '" + it->second + "'");
    }
  }

  int integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("parameter '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

 private:
  std::map<std::string, std::string> raw_;
};

struct Context {
  const ScenarioConfig& cfg;
  const Params& params;
  Checks& checks;
  DiffConfig diff;

  int n() const { return cfg.samples; }
  /// Stream for sample i of sampling group `group`.
  std::mt19937_64 rng(std::uint64_t group, int i) const {
    return stream_rng(cfg.seed, (group << 32) | static_cast<std::uint64_t>(i));
  }
};

/// Tangent vector at x with g-norm drawn uniformly from [0, max_norm].
Vec sample_fiber(std::mt19937_64& rng, const ManifoldModel& M, const Point& x, double max_norm) {
  const Vec d = uniform_direction(rng, M.dim);
  return (uniform(rng, 0.0, max_norm) / std::sqrt(inner(M, x, d, d))) * d;
}

Vec with_norm(const ManifoldModel& M, const Point& x, const Vec& d, double norm) {
  return (norm / std::sqrt(inner(M, x, d, d))) * d;
}

double g_norm(const ManifoldModel& M, const Point& x, const Vec& v) { return std::sqrt(inner(M, x, v, v)); }

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// ---------------------------------------------------------------------------
// k-properties

void run_k_properties(Context& c) {
  const ManifoldModel M = stereo_chart(2, 1.0);
  const SmoothMap phi = veronese_map();
  double k1 = 0.0, kernel = 0.0, split = 0.0, k3 = 0.0, k4 = 0.0, lin = 0.0;

  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(1, i);
    const Point x = uniform_in_ball(rng, 2, 1.5);
    const BundlePoint at{x, gaussian_vec(rng, 2)};
    const Vec X = gaussian_vec(rng, 2), v = gaussian_vec(rng, 2), W = gaussian_vec(rng, 2);

    k1 = std::max(k1, max_abs(connection_map(M, vertical_lift(at, X), c.diff) - X));
    kernel = std::max(kernel, max_abs(connection_map(M, horizontal_lift(M, at, v, c.diff), c.diff)));

    const BundleTangent A{at, v, W};
    const auto [H, V] = hv_decompose(M, A, c.diff);
    const BundleTangent sum = H + V;
    split = std::max(split, max_abs(sum.xdot - A.xdot) + max_abs(sum.zdot - A.zdot));

    const BundleTangent B{at, gaussian_vec(rng, 2), gaussian_vec(rng, 2)};
    const double a = uniform(rng, -2.0, 2.0), b = uniform(rng, -2.0, 2.0);
    const Vec lhs = connection_map(M, a * A + b * B, c.diff);
    const Vec rhs = a * connection_map(M, A, c.diff) + b * connection_map(M, B, c.diff);
    lin = std::max(lin, max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)));

    // Φ_* sends X^v_Z to (φ_*X)^v at φ_*Z.
    const Point t = uniform_in_ball(rng, 2, 0.9);
    const BundleTangent Av = vertical_lift({t, at.z}, X);
    const BundleTangent PA = bundle_differential(phi, Av, c.diff);
    const Mat J = map_jacobian(phi, t, c.diff);
    k3 = std::max(k3, max_abs(PA.xdot) + max_abs(PA.zdot - J * X) + max_abs(PA.base.z - J * at.z));

    // K(ξ̇) = ∇_γ̇ ξ for γ(s) = x + s v, ξ(s) = Z + s W, with the right
    // side from the tangential part of the ambient derivative of E_*ξ.
    const ChartMap& E = *M.embedding;
    const double h = 1e-5;
    auto ambient = [&](double s) { return Vec(jacobian(E, x + s * v, c.diff) * (at.z + s * W)); };
    const Vec d = (ambient(h) - ambient(-h)) / (2.0 * h);
    const Mat JE = jacobian(E, x, c.diff);
    const Vec nabla = (JE.transpose() * JE).ldlt().solve(JE.transpose() * d);
    const Vec K = connection_map(M, A, c.diff);
    k4 = std::max(k4, max_abs(K - nabla) / std::max(1.0, max_abs(K)));
  }
  c.checks.at_most("K of vertical lift", 0.0, k1, k1, 1e-12);
  c.checks.at_most("horizontal lift lies in ker K", 0.0, kernel, kernel, 1e-12);
  c.checks.at_most("A = H + V reconstruction", 0.0, split, split, 1e-12);
  c.checks.at_most("K is linear", 0.0, lin, lin, 1e-12);
  c.checks.at_most("vertical lifts map to vertical lifts", 0.0, k3, k3, 1e-12);
  c.checks.at_most("K equals covariant derivative", 0.0, k4, k4, 1e-6,
                   "ambient tangential projection, central step 1e-5");
}

// ---------------------------------------------------------------------------
// sasaki-cg-special-cases

void run_sasaki_cg(Context& c) {
  const ManifoldModel M = stereo_chart(2, 1.0);
  const CGParams sasaki = CGParams::sasaki(), cg = CGParams::cheeger_gromoll();
  double sasaki_eval = 0.0, sasaki_matrix = 0.0, cg_vertical = 0.0, cg_eval = 0.0, ortho = 0.0;
  double min_eig = kInf;

  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(2, i);
    const Point x = uniform_in_ball(rng, 2, 1.5);
    const BundlePoint at{x, sample_fiber(rng, M, x, 2.0)};
    const BundleTangent A{at, gaussian_vec(rng, 2), gaussian_vec(rng, 2)};
    const BundleTangent B{at, gaussian_vec(rng, 2), gaussian_vec(rng, 2)};

    const Mat g = metric_at(M, x);
    const Christoffel G = christoffel_at(M, x, c.diff);
    const Vec KA = A.zdot + G.contract(A.xdot, at.z), KB = B.zdot + G.contract(B.xdot, at.z);
    const double block = A.xdot.dot(g * B.xdot) + KA.dot(g * KB);

    const double hs = cg_metric_eval(M, sasaki, A, B, c.diff);
    sasaki_eval = std::max(sasaki_eval, std::abs(hs - block) / std::max(1.0, std::abs(block)));

    Vec a(4), b(4);
    a << A.xdot, A.zdot;
    b << B.xdot, B.zdot;
    const double hm = a.dot(cg_metric_matrix_coordinates(M, sasaki, at, c.diff) * b);
    sasaki_matrix = std::max(sasaki_matrix, std::abs(hm - block) / std::max(1.0, std::abs(block)));

    const double z2 = at.z.dot(g * at.z);
    const BundleTangent Zv = vertical_lift(at, at.z);
    cg_vertical = std::max(cg_vertical, std::abs(cg_metric_eval(M, cg, Zv, Zv, c.diff) - z2) / std::max(1.0, z2));

    const double w = 1.0 / (1.0 + z2);
    const double cg_inline =
        A.xdot.dot(g * B.xdot) + w * (KA.dot(g * KB) + KA.dot(g * at.z) * KB.dot(g * at.z));
    cg_eval = std::max(cg_eval, std::abs(cg_metric_eval(M, cg, A, B, c.diff) - cg_inline) /
                                    std::max(1.0, std::abs(cg_inline)));

    const BundleTangent Hor = horizontal_lift(M, at, gaussian_vec(rng, 2), c.diff);
    const BundleTangent Ver = vertical_lift(at, gaussian_vec(rng, 2));
    for (const CGParams* p : {&sasaki, &cg}) ortho = std::max(ortho, std::abs(cg_metric_eval(M, *p, Hor, Ver, c.diff)));

    const Mat h = cg_metric_matrix(M, cg, at, c.diff);
    Eigen::SelfAdjointEigenSolver<Mat> eig(h, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff() / eig.eigenvalues().maxCoeff());
  }

  const Mat at_zero = cg_metric_matrix(M, sasaki, {Vec::Zero(2), Vec::Zero(2)}, c.diff);
  Mat gg = Mat::Zero(4, 4);
  gg.topLeftCorner(2, 2) = gg.bottomRightCorner(2, 2) = metric_at(M, Vec::Zero(2));
  const double zero_block = (at_zero - gg).cwiseAbs().maxCoeff();

  c.checks.at_most("Sasaki metric equals block form", 0.0, sasaki_eval, sasaki_eval, 1e-12);
  c.checks.at_most("Sasaki coordinate matrix equals block form", 0.0, sasaki_matrix, sasaki_matrix, 1e-12);
  c.checks.at_most("Sasaki matrix at Z=0 is g + g", 0.0, zero_block, zero_block, 1e-12);
  c.checks.at_most("Cheeger-Gromoll h(Z^v,Z^v) = |Z|^2", 0.0, cg_vertical, cg_vertical, 1e-12);
  c.checks.at_most("Cheeger-Gromoll metric equals explicit formula", 0.0, cg_eval, cg_eval, 1e-12);
  c.checks.at_most("horizontal and vertical are orthogonal", 0.0, ortho, ortho, 1e-12);
  c.checks.at_least("Cheeger-Gromoll matrix is positive definite", 1e-12, min_eig,
                    "smallest relative eigenvalue");
}

// ---------------------------------------------------------------------------
// veronese-isometry

void run_veronese_isometry(Context& c) {
  const SmoothMap phi = veronese_map();
  std::vector<Point> pts;
  double push = 0.0, sphere = 0.0, antipodal = 0.0;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(3, i);
    pts.push_back(uniform_in_ball(rng, 2, 0.9));
    const Vec v = gaussian_vec(rng, 2);
    const Vec pv = pushforward(phi, pts.back(), v, c.diff);
    const double lhs = g_norm(phi.target, phi(pts.back()), pv), rhs = g_norm(phi.source, pts.back(), v);
    push = std::max(push, std::abs(lhs - rhs) / rhs);

    const Vec x = uniform_direction(rng, 3);
    const Vec u = veronese(x);
    sphere = std::max(sphere, std::abs(u.norm() - veronese_radius()));
    antipodal = std::max(antipodal, max_abs(veronese(-x) - u));
  }
  ConformalityTolerances tol{1e-7, 1e-7};
  const ConformalityReport rep = base_conformality(phi, pts, c.diff, tol);
  double dev = 0.0;
  for (const auto& e : rep.lambda_estimates) dev = std::max(dev, std::abs(e.lambda - 1.0));

  const ConformalityReport fd = base_conformality(phi, pts, c.diff.without_oracles(), tol);
  double dev_fd = 0.0;
  for (const auto& e : fd.lambda_estimates) dev_fd = std::max(dev_fd, std::abs(e.lambda - 1.0));

  c.checks.at_most("dilatation equals 1", 1.0, rep.mean_lambda, dev, 1e-7);
  c.checks.at_most("pullback metric residual", 0.0, rep.max_offdiag_residual, rep.max_offdiag_residual, 1e-7);
  c.checks.at_most("dilatation spread", 0.0, rep.max_lambda_spread, rep.max_lambda_spread, 1e-7);
  c.checks.at_most("pushforward preserves length", 0.0, push, push, 1e-7);
  c.checks.at_most("dilatation equals 1 (finite differences)", 1.0, fd.mean_lambda, dev_fd, 1e-6);
  c.checks.at_most("image lies on sphere of radius 1/sqrt(3)", 0.0, sphere, sphere, 1e-12);
  c.checks.at_most("veronese(-x) = veronese(x)", 0.0, antipodal, antipodal, 1e-15);
}

// ---------------------------------------------------------------------------
// veronese-optimality

/// Π̄(e_i, e_j) of the Veronese surface from explicit component formulas.
Vec pibar_table(const Point& t, int i, int j) {
  const double a = t(0), b = t(1), s = a * a + b * b, r3 = std::sqrt(3.0);
  Vec v(5);
  if (i == 0 && j == 0)
    v << 4 * b * (1 - s - 2 * a * a), 8 * a * (1 - a * a), 4 * a * b * (a * a - b * b - 3),
        s * s - 8 * a * a * b * b + 6 * b * b - 6 * a * a + 1, r3 * (s * s - 2 * s - 4 * a * a + 1);
  else if (i == 1 && j == 1)
    v << 8 * b * (1 - b * b), 4 * a * (1 - s - 2 * b * b), 4 * a * b * (b * b - a * a - 3),
        6 * b * b - 6 * a * a + 8 * a * a * b * b - s * s - 1, r3 * (s * s - 2 * s - 4 * b * b + 1);
  else
    v << 2 * a * (s - 4 * b * b + 1), 2 * b * (s - 4 * a * a + 1), 8 * a * a * b * b - s * s + 1,
        4 * a * b * (a * a - b * b), -4 * r3 * a * b;
  return (4.0 / std::pow(s + 1.0, 4)) * v;
}

void run_veronese_optimality(Context& c) {
  const SmoothMap phi = veronese_map();
  const double rho = veronese_radius();
  double c_dev = 0.0, c_res = 0.0, identity = 0.0, table = 0.0, minimal = 0.0, c_fd = 0.0, c_sum = 0.0;

  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(4, i);
    const Point t = uniform_in_ball(rng, 2, 0.9);
    const OptimalityResult opt = optimality_coefficient(phi, rho, t, c.diff);
    c_dev = std::max(c_dev, std::abs(opt.C - 1.0));
    c_res = std::max(c_res, opt.residual);
    c_sum += opt.C;
    c_fd = std::max(c_fd, std::abs(optimality_coefficient(phi, rho, t, c.diff.without_oracles()).C - 1.0));

    const FormGram G = ambient_sff_gram(phi, t, c.diff);
    const double den = std::pow(t.squaredNorm() + 1.0, 4);
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k)
        for (int b = 0; b < 2; ++b) {
          const double expected = (a == b ? (3.0 * (a == k) + 1.0) * 16.0 / den : 0.0);
          identity = std::max(identity, std::abs(G(a, k, b, k) - expected) / (64.0 / den));
        }
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        const Vec ref = pibar_table(t, a, b);
        const Vec got = ambient_sff(phi, t, Vec::Unit(2, a), Vec::Unit(2, b), c.diff);
        table = std::max(table, max_abs(got - ref) / std::max(1.0, max_abs(ref)));
      }
    minimal = std::max(minimal, mean_curvature(phi, rho, t, c.diff).norm());
  }

  const Vec t0 = Vec::Zero(2);
  const FormGram G0 = ambient_sff_gram(phi, t0, c.diff);
  double at_zero = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k)
      for (int b = 0; b < 2; ++b) {
        const double expected = a != b ? 0.0 : (a == k ? 64.0 : 16.0);
        at_zero = std::max(at_zero, std::abs(G0(a, k, b, k) - expected));
      }
  Vec e11(5);
  e11 << 0, 0, 0, 4, 4 * std::sqrt(3.0);
  const double pibar0 = max_abs(ambient_sff(phi, t0, Vec::Unit(2, 0), Vec::Unit(2, 0), c.diff) - e11);
  const double in11 = sphere_sff_inner(phi, rho, t0, 0, 0, 0, 0, c.diff);
  const double in21 = sphere_sff_inner(phi, rho, t0, 0, 0, 1, 0, c.diff);
  const OptimalityResult half = optimality_coefficient(phi, rho, (Vec(2) << 0.5, 0.0).finished(), c.diff);

  c.checks.at_most("optimality coefficient C = 1", 1.0, c_sum / c.n(), c_dev, 1e-6);
  c.checks.at_most("optimality residual at C", 0.0, c_res, c_res, 1e-6);
  c.checks.at_most("optimality coefficient (finite differences)", 1.0, 1.0 + c_fd, c_fd, 1e-4);
  c.checks.at_most("ambient form inner products match (3d_ik+1)16d_ij/(t^2+1)^4", 0.0, identity, identity, 1e-6,
                   "relative to 64/(t^2+1)^4");
  c.checks.at_most("ambient form matches explicit components", 0.0, table, table, 1e-6);
  c.checks.at_most("ambient inner products at t=0 are 64, 16, 0", 0.0, at_zero, at_zero, 1e-9);
  c.checks.at_most("ambient form at t=0, e1 e1", 0.0, pibar0, pibar0, 1e-9);
  c.checks.close("in-sphere <P(e1,e1),P(e1,e1)> at t=0", 16.0, in11, 1e-9);
  c.checks.close("in-sphere <P(e1,e1),P(e2,e1)> at t=0", 0.0, in21, 1e-9);
  c.checks.close("optimality coefficient at t=(1/2,0)", 1.0, half.C, 1e-6);
  c.checks.at_most("mean curvature vanishes", 0.0, minimal, minimal, 1e-6);
}

// ---------------------------------------------------------------------------
// bundle-conformality

struct MetricPair {
  int id;
  CGParams source, target;
  MetricTriple source_triple, target_triple;
  std::function<double(double)> expected_lambda;  // Λ as a function of |Z|²
};

MetricPair metric_pair(int id, double q, double alpha) {
  if (!(alpha > 0.0)) throw UsageError("alpha must be positive");
  if (!(q >= 0.0)) throw UsageError("q must be non-negative");
  if (id == 1)
    return {1, CGParams::constant(1.0, q, alpha + 1.0), CGParams::constant(1.0, q, alpha),
            {1.0, q, alpha + 1.0}, {1.0, q, alpha},
            [alpha](double z2) { return (1.0 + (alpha + 1.0) * z2) / (1.0 + alpha * z2); }};
  // Pair 2 needs α = 1: the case coefficient λα must equal the optimality
  // coefficient 1 of the Veronese surface.
  return {2, CGParams::constant(1.0, q, 1.0), CGParams::constant(0.0, q, 1.0), {1.0, q, 1.0}, {0.0, q, 1.0},
          [](double z2) { return 1.0 + z2; }};
}

std::vector<int> selected_pairs(const Params& p) {
  const int pair = p.integer("pair", 0);
  if (pair == 0) return {1, 2};
  if (pair != 1 && pair != 2) throw UsageError("pair must be 1 or 2");
  return {pair};
}

/// Points of TM over the hemisphere with |t| ≤ 0.9 and |Z| ≤ max_norm; the
/// first two samples sit at |Z| = 0 and |Z| = max_norm.
std::vector<BundlePoint> bundle_samples(const Context& c, const ManifoldModel& M, std::uint64_t group,
                                        double max_norm) {
  std::vector<BundlePoint> out;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(group, i);
    const Point t = uniform_in_ball(rng, 2, 0.9);
    Vec z = sample_fiber(rng, M, t, max_norm);
    if (i < 2) z = with_norm(M, t, uniform_direction(rng, 2), i == 0 ? 0.0 : max_norm);
    out.push_back({t, z});
  }
  return out;
}

void run_bundle_conformality(Context& c) {
  const double q = c.params.number("q", 1.0), alpha = c.params.number("alpha", 1.0);
  const SmoothMap phi = veronese_map();
  const std::vector<BundlePoint> samples = bundle_samples(c, phi.source, 5, 2.0);
  std::vector<BundlePoint> zero;
  for (const BundlePoint& s : samples) zero.push_back({s.x, Vec::Zero(2)});

  for (int id : selected_pairs(c.params)) {
    const MetricPair mp = metric_pair(id, q, alpha);
    const std::string tag = "pair " + std::to_string(id) + ": ";
    BundleConformalityOptions opts;
    opts.seed = c.cfg.seed;
    opts.base = {1e-7, 1e-7};
    const BundleConformalityReport rep = bundle_conformality(phi, mp.source, mp.target, samples, c.diff, opts);

    double dev = 0.0, closed = 0.0, lam = 0.0, lo = kInf, hi = -kInf;
    for (const BundleSample& s : rep.samples) {
      const double L = mp.expected_lambda(s.z_norm * s.z_norm);
      dev = std::max({dev, std::abs(s.min_ratio - L) / L, std::abs(s.max_ratio - L) / L});
      closed = std::max(closed, std::abs(s.closed_form - L) / L);
      lam = std::max(lam, std::abs(s.lambda - 1.0));
      lo = std::min(lo, s.measured_ratio);
      hi = std::max(hi, s.measured_ratio);
    }
    c.checks.at_most(tag + "base map is conformal with lambda = 1", 1.0, 1.0 + lam, lam, 1e-7);
    c.checks.at_most(tag + "ratio independent of (A,B)", 0.0, rep.max_in_sample_spread, rep.max_in_sample_spread,
                     1e-5);
    c.checks.at_most(tag + "ratio matches expected dilatation", 0.0, dev, dev, 1e-5,
                     id == 1 ? "(1+(a+1)|Z|^2)/(1+a|Z|^2)" : "1+|Z|^2");
    c.checks.at_most(tag + "general closed form matches expected dilatation", 0.0, closed, closed, 1e-9);

    if (id == 2) {
      const BundleConformalityReport r0 = bundle_conformality(phi, mp.source, mp.target, zero, c.diff, opts);
      double d0 = 0.0;
      for (const BundleSample& s : r0.samples)
        d0 = std::max({d0, std::abs(s.min_ratio - s.lambda), std::abs(s.max_ratio - s.lambda),
                       std::abs(s.lambda - 1.0)});
      c.checks.at_most(tag + "Lambda(0) = lambda = 1", 1.0, r0.samples.front().measured_ratio, d0, 1e-5);
      c.checks.at_least(tag + "not a homothety (max - min Lambda)", 1.0, hi - lo);
    }
  }
}

// ---------------------------------------------------------------------------
// case-classification

void run_case_classification(Context& c) {
  const double q = c.params.number("q", 1.0), alpha = c.params.number("alpha", 1.0);
  const SmoothMap phi = veronese_map();
  std::vector<Point> pts;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(6, i);
    pts.push_back(uniform_in_ball(rng, 2, 0.9));
  }
  const ConformalityReport base = base_conformality(phi, pts, c.diff, {1e-7, 1e-7});
  const double lambda = base.mean_lambda;
  const OptimalityResult opt = optimality_coefficient(phi, veronese_radius(), pts.front(), c.diff);

  const MetricPair p1 = metric_pair(1, q, alpha), p2 = metric_pair(2, q, alpha);
  const CaseTag t1 = classify_case(p1.source_triple, p1.target_triple, lambda);
  const CaseTag t2 = classify_case(p2.source_triple, p2.target_triple, lambda);
  const CaseTag ts = classify_case({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, lambda);
  const CaseTag te2 = classify_case({1.0, q, alpha}, {1.0, q / lambda, alpha / lambda}, lambda);
  const CaseTag tin = classify_case({1.0, q + 1.0, alpha + 1.0}, {1.0, q, alpha}, lambda);

  c.checks.label("pair 1 case", "E3", to_string(t1.tag));
  c.checks.close("pair 1 coefficient", 1.0, t1.C, 1e-9);
  c.checks.label("pair 2 case", "E4", to_string(t2.tag));
  c.checks.close("pair 2 coefficient", 1.0, t2.C, 1e-9);
  c.checks.label("Sasaki to Sasaki case", "E1", to_string(ts.tag));
  c.checks.label("balanced p = r = 1 case", "E2", to_string(te2.tag));
  c.checks.label("q != lambda s is incompatible", "INCOMPATIBLE", to_string(tin.tag));
  c.checks.close("pair 1 implied optimality matches measured", opt.C, image_optimality_coefficient(t1, lambda),
                 1e-6);
  c.checks.close("pair 2 implied optimality matches measured", opt.C, image_optimality_coefficient(t2, lambda),
                 1e-6);
}

// ---------------------------------------------------------------------------
// gauss-relation

void run_gauss_relation(Context& c) {
  const SmoothMap phi = veronese_map();
  const double rho = veronese_radius();
  const DiffConfig fd = c.diff.without_oracles();
  double worst = 0.0, k_dev = 0.0, kp_dev = 0.0;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(7, i);
    const Point t = uniform_in_ball(rng, 2, 0.9);
    const Vec u = gaussian_vec(rng, 2), v = gaussian_vec(rng, 2);
    const double kappa = sectional_curvature(phi.source, t, u, v, fd);
    const Mat J = map_jacobian(phi, t, c.diff);
    const double kappa_t = sectional_curvature(phi.target, phi(t), J * u, J * v, fd);
    const double C = optimality_coefficient(phi, rho, t, c.diff).C;
    const double lambda = estimate_dilatation(phi, t, c.diff).lambda;
    worst = std::max(worst, std::abs(gauss_relation_check(kappa, kappa_t, C, lambda)));
    k_dev = std::max(k_dev, std::abs(kappa - 1.0));
    kp_dev = std::max(kp_dev, std::abs(kappa_t - 3.0));
  }
  c.checks.at_most("sectional curvature of the source is 1", 1.0, 1.0 + k_dev, k_dev, 1e-4);
  c.checks.at_most("sectional curvature of the target is 3", 3.0, 3.0 + kp_dev, kp_dev, 1e-4);
  c.checks.at_most("kappa - (lambda kappa' - 2 C lambda)", 0.0, worst, worst, 1e-4);
  c.checks.close("literal relation 1 = 3 - 2", 0.0, gauss_relation_check(1.0, 3.0, 1.0, 1.0), 1e-15);
}

// ---------------------------------------------------------------------------
// k-transfer

/// The coordinate identity from flat ℝ² onto the stereographic chart of Σ²(1):
/// conformal with λ = 4/(1+|x|²)².
std::pair<SmoothMap, ScalarField> conformal_chart_map() {
  SmoothMap phi = linear_map(euclidean(2), stereo_chart(2, 1.0), Mat::Identity(2, 2));
  phi.name = "stereographic conformal factor";
  ScalarField lambda;
  lambda.eval = [](const Point& x) { return 4.0 / std::pow(1.0 + x.squaredNorm(), 2); };
  lambda.gradient_oracle = [](const Point& x) { return Vec((-16.0 / std::pow(1.0 + x.squaredNorm(), 3)) * x); };
  return {phi, lambda};
}

void run_k_transfer(Context& c) {
  const SmoothMap phi = veronese_map();
  const double rho = veronese_radius();
  const ScalarField one = ScalarField::constant(1.0);
  const SmoothMap eq = equator_inclusion(1.0);
  const auto [conf, conf_lambda] = conformal_chart_map();
  double general = 0.0, horizontal = 0.0, vertical = 0.0, equator = 0.0, conformal = 0.0;

  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(8, i);
    const Point t = uniform_in_ball(rng, 2, 0.9);
    const BundlePoint at{t, sample_fiber(rng, phi.source, t, 2.0)};
    const BundleTangent A{at, gaussian_vec(rng, 2), gaussian_vec(rng, 2)};
    general = std::max(general, k_transfer_residual(phi, one, A, rho, c.diff));

    const BundleTangent H = horizontal_lift(phi.source, at, gaussian_vec(rng, 2), c.diff);
    const KTransfer kh = k_transfer(phi, one, H, rho, c.diff);
    const Vec dh = kh.lhs - kh.sff;  // S = 0 and K(H) = 0 leave Π(v′,Z′) alone
    horizontal = std::max(horizontal, std::sqrt(dh.dot(metric_at(phi.target, phi(t)) * dh)));

    const Vec X = gaussian_vec(rng, 2);
    const BundleTangent V = vertical_lift(at, X);
    const Vec dv = connection_map(phi.target, bundle_differential(phi, V, c.diff), c.diff) -
                   map_jacobian(phi, t, c.diff) * X;
    vertical = std::max(vertical, std::sqrt(dv.dot(metric_at(phi.target, phi(t)) * dv)));

    const Point y = uniform_in_ball(rng, 2, 1.5);
    const BundleTangent Ae{{y, gaussian_vec(rng, 2)}, gaussian_vec(rng, 2), gaussian_vec(rng, 2)};
    equator = std::max(equator, k_transfer_residual(eq, one, Ae, std::nullopt, c.diff));
    conformal = std::max(conformal, k_transfer_residual(conf, conf_lambda, Ae, std::nullopt, c.diff));
  }
  c.checks.at_most("Veronese, random A", 0.0, general, general, 1e-5);
  c.checks.at_most("Veronese, horizontal A: K'(PA) = P(v',Z')", 0.0, horizontal, horizontal, 1e-5);
  c.checks.at_most("Veronese, vertical lift: K'(PA) = phi_* X", 0.0, vertical, vertical, 1e-6);
  c.checks.at_most("equator inclusion, random A", 0.0, equator, equator, 1e-5);
  c.checks.at_most("non-constant dilatation, random A", 0.0, conformal, conformal, 1e-5);
}

// ---------------------------------------------------------------------------
// horizontal-preservation

void run_horizontal_preservation(Context& c) {
  const SmoothMap eq = equator_inclusion(1.0), ver = veronese_map();
  double eq_worst = 0.0, ver_best = 0.0;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(9, i);
    const Point y = uniform_in_ball(rng, 2, 1.5);
    const BundlePoint ae{y, sample_fiber(rng, eq.source, y, 2.0)};
    eq_worst = std::max(eq_worst, horizontal_defect(eq, horizontal_lift(eq.source, ae, gaussian_vec(rng, 2), c.diff), c.diff));

    const Point t = uniform_in_ball(rng, 2, 0.9);
    const BundlePoint av{t, sample_fiber(rng, ver.source, t, 2.0)};
    ver_best = std::max(ver_best, horizontal_defect(ver, horizontal_lift(ver.source, av, gaussian_vec(rng, 2), c.diff), c.diff));
  }
  c.checks.at_most("equator inclusion keeps horizontal vectors horizontal", 0.0, eq_worst, eq_worst, 1e-6);
  c.checks.at_least("Veronese moves some horizontal vector off the horizontal", 0.1, ver_best);
}

// ---------------------------------------------------------------------------
// sasaki-corollary

void run_sasaki_corollary(Context& c) {
  const SmoothMap eq = equator_inclusion(1.0);
  BundleConformalityOptions opts;
  opts.seed = c.cfg.seed;

  std::vector<BundlePoint> wide, unit;
  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(10, i);
    const Point y = uniform_in_ball(rng, 2, 1.5);
    wide.push_back({y, sample_fiber(rng, eq.source, y, 2.0)});
    unit.push_back({y, sample_fiber(rng, eq.source, y, 1.0)});
  }

  const BundleConformalityReport a =
      bundle_conformality(eq, CGParams::sasaki(), CGParams::sasaki(), wide, c.diff, opts);
  double dev = 0.0;
  for (const BundleSample& s : a.samples)
    dev = std::max({dev, std::abs(s.min_ratio - 1.0), std::abs(s.max_ratio - 1.0)});
  const CaseTag ta = classify_case({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, 1.0);
  c.checks.at_most("(a) Sasaki to Sasaki on the equator: ratio constant", 0.0, a.max_in_sample_spread,
                   a.max_in_sample_spread, 1e-5);
  c.checks.at_most("(a) Sasaki to Sasaki on the equator: Lambda = lambda = 1", 1.0, 1.0 + dev, dev, 1e-5);
  c.checks.label("(a) case", "E1", to_string(ta.tag));

  const BundleConformalityReport cg =
      bundle_conformality(eq, CGParams::cheeger_gromoll(), CGParams::sasaki(), unit, c.diff, opts);
  const CaseTag tc = classify_case({1.0, 1.0, 1.0}, {0.0, 0.0, 1.0}, 1.0);
  c.checks.at_least("(c) Cheeger-Gromoll to Sasaki: ratio spread over |Z| <= 1", 0.1, cg.max_eigen_spread,
                    "max over samples of the largest minus smallest ratio");
  c.checks.label("(c) case", "INCOMPATIBLE", to_string(tc.tag));
}

// ---------------------------------------------------------------------------
// bilinear-forms

void run_bilinear_forms(Context& c) {
  const int restarts = c.params.integer("restarts", 1000);
  if (restarts < 1) throw UsageError("restarts must be positive");
  double e1 = 0.0, round_trip = 0.0, vanishing = 0.0;
  int branch_mismatch = 0, rejected = 0;

  for (int i = 0; i < c.n(); ++i) {
    auto rng = c.rng(11, i);
    const double C = uniform(rng, 0.1, 4.0), theta = uniform(rng, 0.0, 2.0 * M_PI);
    const Branch br = uniform(rng, 0.0, 1.0) < 0.5 ? Branch::Plain : Branch::Conjugate;
    const int sign = uniform(rng, 0.0, 1.0) < 0.5 ? 1 : -1;
    const SymBilinearForm B = complex_mult_form(C, theta, br, sign);
    e1 = std::max(e1, e1_residual(B, C));

    const auto cls = classify_dim2_form(B);
    if (const auto* ok = std::get_if<Dim2Classification>(&cls)) {
      const SymBilinearForm R = complex_mult_form(ok->params);
      double diff = std::abs(ok->params.C - C);
      for (int k = 0; k < 2; ++k) diff = std::max(diff, (R.coeffs()[k] - B.coeffs()[k]).cwiseAbs().maxCoeff());
      round_trip = std::max(round_trip, diff);
      branch_mismatch += ok->params.branch != br;
    } else {
      round_trip = kInf;
    }

    std::vector<Mat> coeffs;
    for (int k = 0; k < 2; ++k) {
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = uniform(rng, -1, 1), m(1, 1) = uniform(rng, -1, 1), m(0, 1) = m(1, 0) = uniform(rng, -1, 1);
      coeffs.push_back(m);
    }
    rejected += std::holds_alternative<Dim2Rejection>(classify_dim2_form(SymBilinearForm(coeffs)));

    std::vector<Mat> c3;
    for (int k = 0; k < 4; ++k) {
      const Mat g = Eigen::Map<const Mat>(gaussian_vec(rng, 9).data(), 3, 3);
      c3.push_back(0.5 * (g + g.transpose()));
    }
    vanishing += !dim_ge3_certificate(SymBilinearForm(c3), 1e-9).consistent_with_vanishing;
  }

  const E1SearchResult search = search_e1_minimum(3, 6, 1.0, restarts, c.cfg.seed);
  c.checks.at_most("complex-multiplication forms satisfy E1", 0.0, e1, e1, 1e-12);
  c.checks.at_most("dim-2 classification round-trips", 0.0, round_trip, round_trip, 1e-9);
  c.checks.at_most("dim-2 classification recovers the branch", 0.0, branch_mismatch, branch_mismatch, 0.0);
  c.checks.at_least("generic dim-2 forms are rejected", c.n(), rejected);
  c.checks.at_most("dim-3 certificates consistent with vanishing", 0.0, vanishing, vanishing, 0.0);
  c.checks.at_least("dim-3: no form satisfies E1 with C = 1", 1e-3, search.best_residual,
                    std::to_string(restarts) + " Levenberg-Marquardt restarts, dim W = 6");
}

// ---------------------------------------------------------------------------

struct Entry {
  std::string name;
  std::string description;
  std::vector<std::string> params;
  void (*run)(Context&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"k-properties", "connection map: K of lifts, H+V splitting, vertical transfer, covariant derivative", {}, run_k_properties},
      {"sasaki-cg-special-cases", "h_{0,0,1} is Sasaki, h_{1,1,1}(Z^v,Z^v) = |Z|^2", {}, run_sasaki_cg},
      {"veronese-isometry", "the Veronese map has dilatation 1", {}, run_veronese_isometry},
      {"veronese-optimality", "C = 1, the second fundamental form table, minimality", {}, run_veronese_optimality},
      {"bundle-conformality", "bundle dilatations of metric pairs 1 and 2", {"pair", "q", "alpha"},
       run_bundle_conformality},
      {"case-classification", "E1-E4 and q = lambda s on the metric pairs", {"q", "alpha"}, run_case_classification},
      {"gauss-relation", "kappa = lambda kappa' - 2 C lambda on the Veronese surface", {}, run_gauss_relation},
      {"k-transfer", "K'(PA) = phi_* K(A) + phi_* S(v,Z) + P(v',Z')", {}, run_k_transfer},
      {"horizontal-preservation", "horizontal vectors under the equator and Veronese maps", {},
       run_horizontal_preservation},
      {"sasaki-corollary", "Sasaki/Sasaki on the equator, Cheeger-Gromoll to Sasaki", {}, run_sasaki_corollary},
      {"bilinear-forms", "dim-2 classification and the dim-3 obstruction", {"restarts"}, run_bilinear_forms},
  };
  return r;
}

const Entry& lookup(const std::string& name) {
  for (const Entry& e : registry())
    if (e.name == name) return e;
  throw UsageError("unknown scenario '" + name + "'");
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const Entry& e : registry()) out.push_back(e.name);
  return out;
}

std::string scenario_description(const std::string& name) { return lookup(name).description; }

ReportDocument run_scenario(const ScenarioConfig& cfg) {
  const Entry& entry = lookup(cfg.scenario_name);
  cfg.validate();
  const Params params(cfg.params, entry.params);
  Checks checks(cfg.tol);
  Context ctx{cfg, params, checks, DiffConfig{}};

  const auto start = std::chrono::steady_clock::now();
  entry.run(ctx);
  const auto stop = std::chrono::steady_clock::now();

  ReportDocument doc;
  doc.scenario_name = cfg.scenario_name;
  doc.config = cfg;
  doc.checks = checks.take();
  doc.overall_pass = std::all_of(doc.checks.begin(), doc.checks.end(), [](const CheckRecord& r) { return r.pass; });
  doc.timing_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return doc;
}

}  // namespace cgconf
