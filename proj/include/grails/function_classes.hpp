#pragma once

// Realizable function classes presented through sampling oracles: each class
// is a list of convex parameter pieces together with an affine map from
// parameters to predictions at the arm pool.  Single-piece classes cover the
// linear / RKHS / convex-regression constructions; the piecewise container
// covers classes that are unions of convex pieces in one parameter dimension.

#include <utility>
#include <vector>

#include "grails/geometry.hpp"

namespace grails {

struct ArmPool {
  Mat points;  // one arm per row
  int n() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// predictions(z) = M z + c
struct AffineEval {
  Mat M;
  Vec c;

  Vec predict(const Vec& z) const { return c.size() ? Vec(M * z + c) : Vec(M * z); }
  double predict_arm(int i, const Vec& z) const {
    return M.row(i).dot(z) + (c.size() ? c[i] : 0.0);
  }
};

struct Piece {
  ParamBody body;
  AffineEval eval;
};

enum class ClassKind { Linear, Kernel, Convex, Piecewise1D };

struct FunctionClass {
  ClassKind kind = ClassKind::Linear;
  ArmPool arms;
  int param_dim = 0;
  std::vector<Piece> pieces;

  // kernel extras (empty otherwise)
  Mat gram;
  Mat gram_sqrt;
  double norm_bound = 0.0;

  int n() const { return arms.n(); }
  Vec predict(int piece, const Vec& z) const { return pieces[piece].eval.predict(z); }
  double predict_arm(int piece, int i, const Vec& z) const {
    return pieces[piece].eval.predict_arm(i, z);
  }
};

// ---- constructions ----

inline FunctionClass make_linear(ArmPool arms, NormTag tag, double radius) {
  FunctionClass fc;
  fc.kind = ClassKind::Linear;
  fc.param_dim = arms.dim();
  Piece p;
  p.body = make_ball(fc.param_dim, tag, radius);
  p.eval.M = arms.points;
  fc.arms = std::move(arms);
  fc.pieces.push_back(std::move(p));
  return fc;
}

inline Mat rbf_gram(const Mat& points, double sigma) {
  int n = static_cast<int>(points.rows());
  Mat K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double d2 = (points.row(i) - points.row(j)).squaredNorm();
      K(i, j) = K(j, i) = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  return K;
}

// RKHS ball of radius `radius`: coefficients alpha with alpha' K alpha <= r^2,
// predictions K alpha.  Eigenvalues of the Gram matrix are clamped from below
// so that degenerate kernels keep a usable square root.
inline FunctionClass make_kernel(ArmPool arms, const Mat& gram, double radius) {
  FunctionClass fc;
  fc.kind = ClassKind::Kernel;
  fc.param_dim = arms.n();
  fc.norm_bound = radius;

  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  Vec lam = eig.eigenvalues().cwiseMax(1e-10);
  fc.gram = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  fc.gram_sqrt =
      eig.eigenvectors() * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();

  Piece p;
  p.body = make_ellipsoid(fc.gram, radius);
  p.eval.M = fc.gram;
  fc.arms = std::move(arms);
  fc.pieces.push_back(std::move(p));
  return fc;
}

inline FunctionClass make_rbf_kernel(ArmPool arms, double sigma, double radius) {
  Mat K = rbf_gram(arms.points, sigma);
  return make_kernel(std::move(arms), K, radius);
}

// (alpha-strongly) convex regression: parameters are the function values
// y_hat at the arms plus one subgradient per arm, tied together by the
// first-order convexity inequalities.
inline FunctionClass make_convex(ArmPool arms, double value_bound, double grad_bound,
                                 double alpha = 0.0) {
  int n = arms.n(), d = arms.dim();
  FunctionClass fc;
  fc.kind = ClassKind::Convex;
  fc.param_dim = n * (d + 1);
  Piece p;
  ParamBody& body = p.body;
  body.dim = fc.param_dim;
  auto gidx = [&](int j, int k) { return n + j * d + k; };
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(body.dim);
    e[i] = 1.0;
    body.halfspaces.push_back({e, value_bound});
    body.halfspaces.push_back({-e, value_bound});
  }
  for (int j = 0; j < n; ++j) {
    QuadConstraint q;
    for (int k = 0; k < d; ++k) q.indices.push_back(gidx(j, k));
    q.bound = grad_bound;
    body.quads.push_back(std::move(q));
  }
  // y_i >= y_j + g_j . (x_i - x_j) + (alpha/2) |x_i - x_j|^2  for all i != j
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec nvec = Vec::Zero(body.dim);
      nvec[i] = -1.0;
      nvec[j] = 1.0;
      Vec diff = (arms.points.row(i) - arms.points.row(j)).transpose();
      for (int k = 0; k < d; ++k) nvec[gidx(j, k)] = diff[k];
      body.halfspaces.push_back({nvec, -(alpha / 2.0) * diff.squaredNorm()});
    }
  p.eval.M = Mat::Zero(n, fc.param_dim);
  p.eval.M.leftCols(n).setIdentity();
  fc.arms = std::move(arms);
  fc.pieces.push_back(std::move(p));
  return fc;
}

// One-dimensional (alpha-strongly) convex regression over sorted arm
// locations: parameters are just the function values, and convexity is the
// nondecreasing-consecutive-slope condition.  Far smaller than the generic
// subgradient formulation (n variables, O(n) constraints instead of
// n(d+1) variables and O(n^2) constraints), which keeps the projection
// search and the sampler fast and reliable.
inline FunctionClass make_convex_1d(ArmPool arms, double value_bound, double slope_bound,
                                    double alpha = 0.0) {
  int n = arms.n();
  if (arms.dim() != 1) throw std::invalid_argument("make_convex_1d: arms must be 1-D");
  for (int i = 0; i + 1 < n; ++i)
    if (!(arms.points(i, 0) < arms.points(i + 1, 0)))
      throw std::invalid_argument("make_convex_1d: arms must be strictly increasing");
  FunctionClass fc;
  fc.kind = ClassKind::Convex;
  fc.param_dim = n;
  Piece p;
  ParamBody& body = p.body;
  body.dim = n;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    body.halfspaces.push_back({e, value_bound});
    body.halfspaces.push_back({-e, value_bound});
  }
  auto gap = [&](int i) { return arms.points(i + 1, 0) - arms.points(i, 0); };
  // slope_i <= slope_{i+1} - (alpha/2)(x_{i+2} - x_i):
  // (y_{i+1}-y_i)/dx_i - (y_{i+2}-y_{i+1})/dx_{i+1} <= -(alpha/2)(x_{i+2}-x_i)
  for (int i = 0; i + 2 < n; ++i) {
    Vec v = Vec::Zero(n);
    v[i] = -1.0 / gap(i);
    v[i + 1] = 1.0 / gap(i) + 1.0 / gap(i + 1);
    v[i + 2] = -1.0 / gap(i + 1);
    body.halfspaces.push_back(
        {v, -(alpha / 2.0) * (arms.points(i + 2, 0) - arms.points(i, 0))});
  }
  // |slope_i| <= slope_bound
  for (int i = 0; i + 1 < n; ++i) {
    Vec v = Vec::Zero(n);
    v[i] = -1.0 / gap(i);
    v[i + 1] = 1.0 / gap(i);
    body.halfspaces.push_back({v, slope_bound});
    body.halfspaces.push_back({-v, slope_bound});
  }
  p.eval.M = Mat::Identity(n, n);
  fc.arms = std::move(arms);
  fc.pieces.push_back(std::move(p));
  return fc;
}

// The hard linear best-arm family (minimization form): arms
// x_i = (i/n) e_1 + 10 e_{i+1}, one one-dimensional parameter piece per step
// position j (parameter b in [j/n, (j+1)/n]).  Piece j predicts ~10 on arms
// i < j, ~9 on arms i >= j, except a ~0 spike at arm j + 1; the last piece
// has no spike and its minimizer is arm n - 1.  The 10/9 step sits right at
// the spike, so best-arm identification amounts to a binary search for the
// step followed by one confirming query.
inline FunctionClass make_piecewise_spike(int n) {
  FunctionClass fc;
  fc.kind = ClassKind::Piecewise1D;
  fc.param_dim = 1;
  fc.arms.points = Mat::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) {
    fc.arms.points(i, 0) = static_cast<double>(i + 1) / n;
    fc.arms.points(i, i + 1) = 10.0;
  }
  for (int j = 0; j < n; ++j) {
    Piece p;
    p.body = make_box(Vec::Constant(1, static_cast<double>(j) / n),
                      Vec::Constant(1, static_cast<double>(j + 1) / n));
    // Mild slope in b keeps the constraint geometry non-degenerate without
    // ever moving a prediction across a rounding boundary (|0.1 b| <= 0.1).
    p.eval.M = Mat::Constant(n, 1, 0.1);
    p.eval.c = Vec(n);
    for (int i = 0; i < n; ++i) {
      double base = i < j ? 10.0 : 9.0;
      if (i == j + 1) base = 0.0;
      p.eval.c[i] = base;
    }
    fc.pieces.push_back(std::move(p));
  }
  return fc;
}

// ---- prior knowledge ----

struct PriorKnowledge {
  // f(x_first) <= f(x_second) for each pair
  std::vector<std::pair<int, int>> order_pairs;
  // w . predictions <= b, expressed over the prediction vector
  std::vector<Halfspace> prediction_halfspaces;
};

inline void apply_prior(FunctionClass& fc, const PriorKnowledge& prior) {
  for (auto& piece : fc.pieces) {
    const Mat& M = piece.eval.M;
    const Vec& c = piece.eval.c;
    auto offset = [&](int i) { return c.size() ? c[i] : 0.0; };
    for (auto [i, j] : prior.order_pairs) {
      Vec nvec = (M.row(i) - M.row(j)).transpose();
      piece.body.halfspaces.push_back({nvec, offset(j) - offset(i)});
    }
    for (const auto& h : prior.prediction_halfspaces) {
      Vec nvec = M.transpose() * h.normal;
      double b = h.offset - (c.size() ? h.normal.dot(c) : 0.0);
      piece.body.halfspaces.push_back({nvec, b});
    }
  }
}

// ---- label / improvement halfspaces in parameter space ----

// lo <= prediction_i <= hi  (infinite sides omitted)
inline std::vector<Halfspace> halfspaces_for_label(const AffineEval& eval, int i, double lo,
                                                   double hi) {
  std::vector<Halfspace> out;
  Vec row = eval.M.row(i).transpose();
  double c = eval.c.size() ? eval.c[i] : 0.0;
  if (std::isfinite(hi)) out.push_back({row, hi - c});
  if (std::isfinite(lo)) out.push_back({-row, c - lo});
  return out;
}

// prediction_l <= prediction_i - eps
inline Halfspace improvement_halfspace(const AffineEval& eval, int l, int i, double eps) {
  Vec nvec = (eval.M.row(l) - eval.M.row(i)).transpose();
  double cl = eval.c.size() ? eval.c[l] : 0.0;
  double ci = eval.c.size() ? eval.c[i] : 0.0;
  return {nvec, ci - cl - eps};
}

// Random RKHS element with the requested norm: standard normal coefficients
// rescaled so that |K^{1/2} alpha| equals target_norm.
inline Vec random_rkhs_function(const FunctionClass& fc, double target_norm, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec alpha(fc.param_dim);
  for (int i = 0; i < fc.param_dim; ++i) alpha[i] = gauss(rng);
  double norm = std::sqrt(std::max(1e-300, alpha.dot(fc.gram * alpha)));
  return alpha * (target_norm / norm);
}

}  // namespace grails
