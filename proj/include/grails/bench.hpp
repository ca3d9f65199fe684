#pragma once

// Benchmark instances: the hard constructions from the analysis (spike
// thresholds, coupled thresholds, regret/loss gap families, the OFUL trap)
// plus the sampled RKHS / convex-regression experiment generators, and small
// helpers for measuring query counts against simple-regret targets.

#include <cmath>
#include <string>

#include "grails/baselines.hpp"
#include "grails/dims.hpp"

namespace grails {

struct Instance {
  std::string tag;
  uint64_t seed = 0;
  int n = 0;
  VsMode mode = VsMode::Discrete;
  OutputGrid grid;
  ContinuousGrid cgrid;

  std::optional<FiniteClass> finite;
  int truth_index = -1;

  std::optional<FunctionClass> cls;
  int truth_piece = 0;
  Vec truth_params;

  Vec truth_values;  // raw truth predictions at the arms

  Oracle oracle() const {
    if (mode == VsMode::Continuous)
      return [this](int i) { return truth_values[i]; };
    return [this](int i) { return grid.round(truth_values[i]); };
  }

  // labels as the algorithms see them
  Vec labels() const {
    Vec out(n);
    auto f = oracle();
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }

  double truth_min() const { return labels().minCoeff(); }

  bool is_best_arm(int arm, double eps = 0.0) const {
    if (arm < 0) return false;
    Vec l = labels();
    return l[arm] <= l.minCoeff() + eps;
  }

  VersionSpace make_vs(double eps) const {
    VersionSpace vs(mode, grid, eps, n);
    vs.cgrid = cgrid;
    return vs;
  }
};

// ---- finite constructions ----

inline Instance make_finite_instance(std::string tag, Mat values, std::vector<double> grid_values,
                                     int truth_index, VsMode mode = VsMode::Discrete) {
  Instance inst;
  inst.tag = std::move(tag);
  inst.n = static_cast<int>(values.cols());
  inst.mode = mode;
  inst.grid.values = std::move(grid_values);
  inst.finite = FiniteClass{std::move(values)};
  inst.truth_index = truth_index;
  inst.truth_values = inst.finite->row(truth_index);
  return inst;
}

// Spike-threshold family (sampled view): one-dimensional piecewise linear
// class with a moving spike; truth is the piece `truth_piece` at its
// midpoint parameter.
inline Instance gen_prop6(int n, int truth_piece) {
  Instance inst;
  inst.tag = "prop6_linear";
  inst.n = n;
  inst.grid.values = {0.0, 9.0, 10.0};
  inst.cls = make_piecewise_spike(n);
  inst.truth_piece = truth_piece;
  inst.truth_params = Vec::Constant(1, (truth_piece + 0.5) / n);
  inst.truth_values = inst.cls->predict(truth_piece, inst.truth_params);
  return inst;
}

// Spike family (finite proof-table view): the rounded labels of each piece's
// midpoint parameter.  f_j is 10 on arms before the step at j, 9 from the
// step onwards, and 0 at its spike arm j + 1 (absent for the last piece).
inline Instance gen_prop6_table(int n, int truth_index = 0) {
  Mat v(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double base = i < j ? 10.0 : 9.0;
      if (i == j + 1) base = 0.0;
      v(j, i) = base;
    }
  return make_finite_instance("prop6_table", std::move(v), {0.0, 9.0, 10.0}, truth_index);
}

inline Instance gen_thresholds(int n, int truth_index = 0) {
  Mat v(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) v(i - 1, j - 1) = j <= i ? 1.0 : 0.0;
  return make_finite_instance("thresholds", std::move(v), {0.0, 1.0}, truth_index);
}

// Coupled thresholds over +-1 labels: m block thresholds tied to a suffix
// code, plus the all-negative function.
inline Instance gen_coupled_thresholds(int m, int truth_index = 0) {
  int ell = m + 1;
  int n = m * ell + m;
  Mat v = Mat::Constant(m + 1, n, -1.0);  // row 0 is f_0 == -1
  for (int i = 1; i <= m; ++i) {
    for (int j = ell * (i - 1) + 1; j <= i * ell; ++j) v(i, j - 1) = 1.0;
    for (int j = m * ell + 1; j <= m * ell + i; ++j) v(i, j - 1) = 1.0;
  }
  return make_finite_instance("coupled_thresholds", std::move(v), {-1.0, 1.0}, truth_index,
                              VsMode::Classification);
}

// Regret-gap family (shifted to nonnegative losses): a spike of 2 at arm i in
// the first block, a binary-searchable run of zeros at the tail.
inline Instance gen_regret_gap(int k, int truth_index = 0) {
  Mat v(k, 2 * k);
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= 2 * k; ++j) {
      double val = 1.0;
      if (j == i) val = 2.0;
      else if (j >= 2 * k - i) val = 0.0;
      v(i - 1, j - 1) = val;
    }
  return make_finite_instance("regret_gap", std::move(v), {0.0, 1.0, 2.0}, truth_index);
}

// Loss-gap family: expensive pair probes up front, cheap sequential probes in
// the tail; losses {1, 1 + dmin, 1 + dmax}.
inline Instance gen_loss_gap(int m, double dmin = 1.0, double dmax = 20.0, int truth_index = 0) {
  double ystar = 1.0, ytil = 1.0 + dmin, ybar = 1.0 + dmax;
  int n = m + m / 2;
  Mat v(m, n);
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= n; ++i) {
      double val;
      if (i <= m / 2) val = (i == 2 * j - 1 || i == 2 * j) ? ystar : ybar;
      else val = (i == m / 2 + j) ? ystar : ytil;
      v(j - 1, i - 1) = val;
    }
  return make_finite_instance("loss_gap", std::move(v), {ystar, ytil, ybar}, truth_index);
}

// Two arms where worst-case regret and worst-case loss demand different
// queries.
inline Instance gen_two_arm(double delta = 100.0, int truth_index = 0) {
  Mat v(2, 2);
  v << delta, delta - 1.0, 1.0, delta / 2.0 + 1.0;
  std::vector<double> grid{1.0, delta / 2.0 + 1.0, delta - 1.0, delta};
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return make_finite_instance("two_arm_tradeoff", std::move(v), std::move(grid), truth_index);
}

// OFUL trap: m singleton minima in the first block, a binary-searchable ramp
// of 0.5s in the second; confidence-bound learners sweep the whole first
// block while version-space search binary-searches the ramp.
inline Instance gen_oful_bad(int m, int truth_index = -1) {
  int n = 2 * m;
  Mat v(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      double val = 1.0;
      if (j == i) val = 0.0;
      else if (j > m && j <= m + i) val = 0.5;
      v(i - 1, j - 1) = val;
    }
  if (truth_index < 0) truth_index = m - 1;
  return make_finite_instance("oful_bad", std::move(v), {0.0, 0.5, 1.0}, truth_index);
}

// ---- sampled experiment instances ----

// Random RKHS target on a g x g grid over [0,1]^2.
inline Instance gen_rkhs_random(int g, double sigma, double radius, uint64_t seed,
                                int grid_cells = 100) {
  Instance inst;
  inst.tag = "rkhs_random";
  inst.seed = seed;
  inst.n = g * g;
  inst.mode = VsMode::Continuous;
  inst.cgrid.p = grid_cells;
  Mat pts(inst.n, 2);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      pts(a * g + b, 0) = g == 1 ? 0.0 : static_cast<double>(a) / (g - 1);
      pts(a * g + b, 1) = g == 1 ? 0.0 : static_cast<double>(b) / (g - 1);
    }
  inst.cls = make_rbf_kernel(ArmPool{std::move(pts)}, sigma, radius);
  Rng rng(seed);
  inst.truth_params = random_rkhs_function(*inst.cls, 0.9 * radius, rng);
  inst.truth_values = inst.cls->predict(0, inst.truth_params);
  return inst;
}

// One-dimensional RKHS instance on [0, 6] with optional pairwise-order prior
// knowledge consistent with the truth.
inline Instance gen_rkhs_prior(int n, double sigma, double radius, int n_constraints,
                               uint64_t seed, int grid_cells = 300) {
  Instance inst;
  inst.tag = "rkhs_prior_knowledge";
  inst.seed = seed;
  inst.n = n;
  inst.mode = VsMode::Continuous;
  inst.cgrid.p = grid_cells;
  Mat pts(n, 1);
  for (int i = 0; i < n; ++i) pts(i, 0) = 6.0 * i / (n - 1);
  inst.cls = make_rbf_kernel(ArmPool{std::move(pts)}, sigma, radius);
  Rng rng(seed);
  inst.truth_params = random_rkhs_function(*inst.cls, 0.9 * radius, rng);
  inst.truth_values = inst.cls->predict(0, inst.truth_params);
  if (n_constraints > 0) {
    PriorKnowledge prior;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (static_cast<int>(prior.order_pairs.size()) < n_constraints) {
      int a = pick(rng), b = pick(rng);
      if (a == b || inst.truth_values[a] == inst.truth_values[b]) continue;
      if (inst.truth_values[a] <= inst.truth_values[b]) prior.order_pairs.push_back({a, b});
      else prior.order_pairs.push_back({b, a});
    }
    apply_prior(*inst.cls, prior);
  }
  return inst;
}

// Convex quadratic target f(x) = (x - xmin)^2 on a uniform grid of arms in
// [0, 1], presented through the convex-regression class.
inline Instance gen_convex_quadratic(int n, uint64_t seed, int grid_cells = 1500,
                                     double alpha = 0.0) {
  Instance inst;
  inst.tag = "convex_quadratic";
  inst.seed = seed;
  inst.n = n;
  inst.mode = VsMode::Continuous;
  inst.cgrid.p = grid_cells;
  Mat pts(n, 1);
  for (int i = 0; i < n; ++i) pts(i, 0) = static_cast<double>(i) / (n - 1);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.25, 0.75);
  double xmin = u(rng);
  inst.cls = make_convex_1d(ArmPool{pts}, 1.5, 3.0, alpha);
  inst.truth_params = Vec(n);
  inst.truth_values = Vec(n);
  for (int i = 0; i < n; ++i) {
    double x = pts(i, 0);
    inst.truth_params[i] = (x - xmin) * (x - xmin);
    inst.truth_values[i] = inst.truth_params[i];
  }
  return inst;
}

// Finite discretization of a strongly convex family on arms {1, ..., K}:
// rounded quadratics (alpha/2)(x - c)^2 with centers swept over [2, K-1].
inline Instance gen_strongly_convex(int K, double alpha, int truth_index = 0) {
  std::vector<Vec> rows;
  OutputGrid grid;
  double ymax = 0.0;
  for (double c = 2.0; c <= K - 1.0 + 1e-9; c += 0.5) {
    Vec r(K);
    for (int x = 1; x <= K; ++x) {
      r[x - 1] = std::round(alpha / 2.0 * (x - c) * (x - c));
      ymax = std::max(ymax, r[x - 1]);
    }
    bool dup = false;
    for (const auto& q : rows)
      if ((q - r).norm() < 1e-12) dup = true;
    if (!dup) rows.push_back(r);
  }
  Mat v(rows.size(), K);
  for (size_t f = 0; f < rows.size(); ++f) v.row(f) = rows[f].transpose();
  for (double y = 0.0; y <= ymax + 0.5; y += 1.0) grid.values.push_back(y);
  Instance inst = make_finite_instance("strongly_convex_grid", std::move(v),
                                       std::move(grid.values), truth_index);
  return inst;
}

// ---- experiment helpers ----

// First query count at which the best observed truth value is within
// `target` of the optimum; -1 if never reached.
inline int queries_to_simple_regret(const RunRecord& rec, const Vec& truth_values,
                                    double target) {
  double opt = truth_values.minCoeff();
  double best = kInf;
  for (size_t t = 0; t < rec.rounds.size(); ++t) {
    best = std::min(best, truth_values[rec.rounds[t].arm]);
    if (best <= opt + target) return static_cast<int>(t) + 1;
  }
  return -1;
}

}  // namespace grails
