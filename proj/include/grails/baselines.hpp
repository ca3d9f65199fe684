#pragma once

// Reference baselines: uniform random search, a noiseless GP-UCB loop, and an
// OFUL-style confidence-bound learner driven by samples from the
// observation-consistent body.

#include "grails/grails.hpp"

namespace grails {

// Uniform search without replacement; the caller post-processes the trace
// against whatever stop rule the experiment uses.
inline RunRecord run_unif(int n, const Oracle& oracle, Rng& rng, int budget = -1) {
  if (budget < 0) budget = n;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  RunRecord rec;
  QueryLog log(n);
  for (int t = 1; t <= std::min(budget, n); ++t) {
    int arm = order[t - 1];
    double y = oracle(arm);
    log.add(arm, y);
    rec.total_loss += y;
    rec.rounds.push_back({t, 1, arm, y, 0.0, 0.0, true});
  }
  rec.returned_arm = detail::argmin_observed(log);
  rec.stop_reason = "budget-exhausted";
  return rec;
}

// Noiseless GP-UCB (minimization): the posterior interpolates observations;
// each round queries the unqueried arm minimizing mu - sqrt(beta_t) * s with
// beta_t = 2 log(n t^2 pi^2 / 0.6).
inline RunRecord run_gp_ucb(const Mat& arm_points, double sigma, const Oracle& oracle,
                            int budget = -1) {
  int n = static_cast<int>(arm_points.rows());
  if (budget < 0) budget = n;
  Mat K = rbf_gram(arm_points, sigma);
  RunRecord rec;
  QueryLog log(n);
  std::vector<int> obs;
  Vec ys(n);
  for (int t = 1; t <= std::min(budget, n); ++t) {
    Vec mu = Vec::Zero(n), var = K.diagonal();
    if (!obs.empty()) {
      int s = static_cast<int>(obs.size());
      Mat Kss(s, s);
      Mat Kxs(n, s);
      Vec yo(s);
      for (int a = 0; a < s; ++a) {
        yo[a] = ys[obs[a]];
        for (int b = 0; b < s; ++b) Kss(a, b) = K(obs[a], obs[b]);
        for (int i = 0; i < n; ++i) Kxs(i, a) = K(i, obs[a]);
      }
      // escalate jitter until the noiseless solve is stable
      double jitter = 1e-10;
      Eigen::LDLT<Mat> ldlt;
      for (;;) {
        ldlt.compute(Kss + jitter * Mat::Identity(s, s));
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) break;
        jitter *= 10.0;
        if (jitter > 1e-2) break;
      }
      Mat alpha = ldlt.solve(Kxs.transpose());
      mu = alpha.transpose() * yo;
      for (int i = 0; i < n; ++i)
        var[i] = std::max(0.0, K(i, i) - Kxs.row(i).dot(alpha.col(i)));
    }
    double beta = 2.0 * std::log(n * static_cast<double>(t) * t * M_PI * M_PI / 0.6);
    int pick = -1;
    double best = kInf;
    for (int i = 0; i < n; ++i) {
      if (log.is_queried(i)) continue;
      double acq = mu[i] - std::sqrt(beta * var[i]);
      if (acq < best) {
        best = acq;
        pick = i;
      }
    }
    if (pick < 0) break;
    double y = oracle(pick);
    ys[pick] = y;
    obs.push_back(pick);
    log.add(pick, y);
    rec.total_loss += y;
    rec.rounds.push_back({t, 1, pick, y, best, 0.0, true});
  }
  rec.returned_arm = detail::argmin_observed(log);
  rec.stop_reason = "budget-exhausted";
  return rec;
}

// OFUL-style learner: per round, sample the observation-consistent body,
// take empirical [LCB, UCB] per arm, query argmin LCB (lowest index on
// ties), and stop once the best observation is within eps of every
// unqueried arm's LCB.
inline RunRecord run_oful_style(VersionSpace vs, Backend& backend, const Oracle& oracle,
                                double eps, const AlgoConfig& cfg) {
  vs.mode = VsMode::Classification;  // consistency constraints only
  Rng rng(cfg.seed);
  RunRecord rec;
  for (int t = 1; t <= vs.n; ++t) {
    auto model = backend.make_model(vs, rng);
    auto batch = detail::draw_batch(*model, cfg.budget_samples, rng);
    Vec lcb = Vec::Constant(vs.n, kInf);
    for (const auto& p : batch.preds)
      for (int i = 0; i < vs.n; ++i) lcb[i] = std::min(lcb[i], p[i]);
    double best_obs = vs.log.empty() ? kInf : vs.log.min_label();
    double min_unq = kInf;
    int pick = -1;
    for (int i = 0; i < vs.n; ++i) {
      if (vs.log.is_queried(i)) continue;
      min_unq = std::min(min_unq, lcb[i]);
      if (pick < 0 || lcb[i] < lcb[pick]) pick = i;
    }
    if (pick < 0) break;
    if (best_obs <= min_unq + eps) {
      rec.stop_reason = "lcb-stop";
      rec.returned_arm = detail::argmin_observed(vs.log);
      return rec;
    }
    double y = oracle(pick);
    vs.log.add(pick, y);
    rec.total_loss += y;
    rec.rounds.push_back({t, 1, pick, y, lcb[pick], 0.0, true});
  }
  rec.stop_reason = "all-arms-queried";
  rec.returned_arm = detail::argmin_observed(vs.log);
  return rec;
}

}  // namespace grails
