#pragma once

// Output grids, query logs, and the decomposition of the surviving version
// space into per-arm convex components ("arm l can still improve on every
// queried arm").

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "grails/function_classes.hpp"
#include "grails/sampler.hpp"

namespace grails {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Finite output grid.  Rounding maps a real prediction to the nearest grid
// value with ties resolved downward, so cell j is the half-open interval
// (midpoint(j-1, j), midpoint(j, j+1)].
struct OutputGrid {
  std::vector<double> values;  // strictly increasing

  int size() const { return static_cast<int>(values.size()); }

  int round_index(double z) const {
    int lo = 0, hi = size() - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      // z belongs to the lower side iff z <= midpoint(mid, mid+1)
      if (z <= 0.5 * (values[mid] + values[mid + 1])) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }
  double round(double z) const { return values[round_index(z)]; }

  // (lo, hi] bounds of cell j; infinite at the extremes
  std::pair<double, double> cell(int j) const {
    double lo = j == 0 ? -kInf : 0.5 * (values[j - 1] + values[j]);
    double hi = j == size() - 1 ? kInf : 0.5 * (values[j] + values[j + 1]);
    return {lo, hi};
  }

  double max_value() const { return values.back(); }
};

// Uniform grid of p cells of width delta = 2/p covering [-1, 1),
// L_j = [-1 + j*delta, -1 + (j+1)*delta).
struct ContinuousGrid {
  int p = 100;

  double delta() const { return 2.0 / p; }
  int index(double y) const {
    int j = static_cast<int>(std::floor((y + 1.0) / delta()));
    return std::clamp(j, 0, p - 1);
  }
  std::pair<double, double> bounds(int j) const {
    return {-1.0 + j * delta(), -1.0 + (j + 1) * delta()};
  }
  double midpoint(int j) const { return -1.0 + (j + 0.5) * delta(); }
};

struct QueryLog {
  struct Entry {
    int arm = -1;
    double label = 0.0;
  };
  std::vector<Entry> entries;
  std::vector<char> queried;

  explicit QueryLog(int n_arms = 0) : queried(n_arms, 0) {}

  bool empty() const { return entries.empty(); }
  bool is_queried(int i) const { return queried[i] != 0; }
  void add(int arm, double label) {
    entries.push_back({arm, label});
    queried[arm] = 1;
  }
  double min_label() const {
    double m = kInf;
    for (const auto& e : entries) m = std::min(m, e.label);
    return m;
  }
};

enum class VsMode { Discrete, Continuous, Classification };

// Version-space state shared by all backends: output discretization, the
// query log, and the improvement slack.  The function class itself is passed
// alongside where geometry is needed, so finite classes can reuse this state.
struct VersionSpace {
  VsMode mode = VsMode::Discrete;
  OutputGrid grid;       // discrete / classification
  ContinuousGrid cgrid;  // continuous
  double eps = 0.0;
  int n = 0;
  QueryLog log;

  VersionSpace() = default;
  VersionSpace(VsMode m, OutputGrid g, double epsilon, int n_arms)
      : mode(m), grid(std::move(g)), eps(epsilon), n(n_arms), log(n_arms) {}
};

// Largest grid value strictly below (min observed label - eps); nullopt when
// no grid value qualifies (then no unqueried arm can improve and we stop).
inline std::optional<int> better_threshold_index(const OutputGrid& grid, const QueryLog& log,
                                                 double eps) {
  if (log.empty()) return std::nullopt;
  double cut = log.min_label() - eps;
  int best = -1;
  for (int j = 0; j < grid.size(); ++j)
    if (grid.values[j] < cut) best = j;
  if (best < 0) return std::nullopt;
  return best;
}

inline std::optional<double> better_threshold(const OutputGrid& grid, const QueryLog& log,
                                              double eps) {
  auto j = better_threshold_index(grid, log, eps);
  if (!j) return std::nullopt;
  return grid.values[*j];
}

// One convex component of the surviving version space: functions consistent
// with the log for which arm `arm` can still beat every queried arm.
struct ComponentSpec {
  int arm = -1;  // -1 for the single classification component
  int piece = 0;
  ParamBody body;
};

inline std::vector<ComponentSpec> build_components(const VersionSpace& vs,
                                                   const FunctionClass& fc) {
  std::vector<ComponentSpec> out;

  auto add_observation_constraints = [&](ParamBody& body, const AffineEval& eval) {
    for (const auto& e : vs.log.entries) {
      double lo, hi;
      if (vs.mode == VsMode::Continuous || vs.grid.values.empty()) {
        std::tie(lo, hi) = vs.cgrid.bounds(vs.cgrid.index(e.label));
      } else {
        std::tie(lo, hi) = vs.grid.cell(vs.grid.round_index(e.label));
      }
      for (auto& h : halfspaces_for_label(eval, e.arm, lo, hi)) body.halfspaces.push_back(h);
    }
  };

  if (vs.mode == VsMode::Classification) {
    for (size_t pi = 0; pi < fc.pieces.size(); ++pi) {
      ComponentSpec c;
      c.arm = -1;
      c.piece = static_cast<int>(pi);
      c.body = fc.pieces[pi].body;
      add_observation_constraints(c.body, fc.pieces[pi].eval);
      out.push_back(std::move(c));
    }
    return out;
  }

  std::optional<int> better;
  if (vs.mode == VsMode::Discrete && !vs.log.empty()) {
    better = better_threshold_index(vs.grid, vs.log, vs.eps);
    if (!better) return out;  // STOP: nothing can improve on the best observation
  }

  for (int l = 0; l < fc.n(); ++l) {
    if (vs.log.is_queried(l)) continue;
    for (size_t pi = 0; pi < fc.pieces.size(); ++pi) {
      const auto& eval = fc.pieces[pi].eval;
      ComponentSpec c;
      c.arm = l;
      c.piece = static_cast<int>(pi);
      c.body = fc.pieces[pi].body;
      add_observation_constraints(c.body, eval);
      if (vs.mode == VsMode::Discrete) {
        if (better) {
          // prediction_l must round to at most the improvement threshold
          double hi = vs.grid.cell(*better).second;
          for (auto& h : halfspaces_for_label(eval, l, -kInf, hi))
            c.body.halfspaces.push_back(h);
        }
      } else {  // continuous: arm l beats every observation by eps
        for (const auto& e : vs.log.entries)
          c.body.halfspaces.push_back(improvement_halfspace(eval, l, e.arm, vs.eps));
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Is the function with these raw predictions still in the version space?
inline bool survives(const VersionSpace& vs, const Vec& preds) {
  if (vs.mode == VsMode::Continuous) {
    for (const auto& e : vs.log.entries)
      if (vs.cgrid.index(preds[e.arm]) != vs.cgrid.index(e.label)) return false;
    double m = preds.minCoeff();
    for (const auto& e : vs.log.entries)
      if (preds[e.arm] <= m + vs.eps) return false;
    return true;
  }
  for (const auto& e : vs.log.entries)
    if (vs.grid.round(preds[e.arm]) != vs.grid.round(e.label)) return false;
  if (vs.mode == VsMode::Classification) return true;
  double m = kInf;
  for (int j = 0; j < preds.size(); ++j) m = std::min(m, vs.grid.round(preds[j]));
  for (const auto& e : vs.log.entries)
    if (vs.grid.round(preds[e.arm]) <= m + vs.eps) return false;
  return true;
}

// Would observing label y at arm i remove the function with these raw
// predictions from the surviving version space?  Functions already outside
// the version space contribute nothing: the selection objective measures
// removal from the *current* surviving set, not from the phase mixture.
inline bool removal_event(const VersionSpace& vs, int i, double y, const Vec& preds) {
  if (!survives(vs, preds)) return false;
  if (vs.mode == VsMode::Classification)
    return vs.grid.round(preds[i]) != y;
  if (vs.mode == VsMode::Continuous) {
    if (vs.cgrid.index(preds[i]) != vs.cgrid.index(y)) return true;
    return preds[i] <= preds.minCoeff() + vs.eps;
  }
  double ri = vs.grid.round(preds[i]);
  if (ri != vs.grid.round(y)) return true;
  double m = kInf;
  for (int j = 0; j < preds.size(); ++j) m = std::min(m, vs.grid.round(preds[j]));
  return ri <= m + vs.eps;
}

struct StopResult {
  bool stopped = false;
  std::string reason;
};

// STOP fires when no grid value can improve on the best observation or when
// every surviving component is (reported) infeasible.  Infeasibility verdicts
// inherit the one-sided nature of the projection-based search.
inline StopResult stop_check(const VersionSpace& vs, const FunctionClass& fc, Rng& rng,
                             const InteriorPointOpts& opts = {}) {
  if (vs.mode == VsMode::Discrete && !vs.log.empty() &&
      !better_threshold_index(vs.grid, vs.log, vs.eps))
    return {true, "no-grid-improvement"};
  if (vs.mode == VsMode::Classification) {
    auto comps = build_components(vs, fc);
    for (int j = 0; j < fc.n(); ++j) {
      if (vs.log.is_queried(j)) continue;
      int feasible_labels = 0;
      for (double y : vs.grid.values) {
        for (const auto& c : comps) {
          ParamBody b = c.body;
          auto [lo, hi] = vs.grid.cell(vs.grid.round_index(y));
          for (auto& h : halfspaces_for_label(fc.pieces[c.piece].eval, j, lo, hi))
            b.halfspaces.push_back(h);
          if (feasibility(b, rng, opts).feasible) {
            ++feasible_labels;
            break;
          }
        }
      }
      if (feasible_labels > 1) return {false, ""};
    }
    return {true, "labels-determined"};
  }
  for (const auto& c : build_components(vs, fc)) {
    if (feasibility(c.body, rng, opts).feasible) return {false, ""};
  }
  return {true, "version-space-empty"};
}

// Probability mass the base distribution puts on the rounded label vector
// `labels`, estimated from uniform samples of the base body (pieces weighted
// equally; pieces of a piecewise class carry equal base mass).
inline double partition_probability(const FunctionClass& fc, const OutputGrid& grid,
                                    const Vec& labels, int samples, Rng& rng,
                                    ChainConfig cfg = {}) {
  std::vector<HitAndRunChain> chains;
  for (const auto& piece : fc.pieces) {
    auto w = find_interior_point(piece.body, rng);
    if (!w) throw std::runtime_error("partition_probability: base body has no interior point");
    chains.emplace_back(&piece.body, *w, cfg);
  }
  std::uniform_int_distribution<size_t> pick(0, fc.pieces.size() - 1);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    size_t pi = pick(rng);
    Vec preds = fc.predict(static_cast<int>(pi), chains[pi].next_sample(rng));
    bool match = true;
    for (int i = 0; i < fc.n() && match; ++i)
      if (grid.round(preds[i]) != labels[i]) match = false;
    if (match) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

// Feasible parameter interval of a one-dimensional body (halfspaces only).
inline std::optional<std::pair<double, double>> interval_of_1d_body(const ParamBody& body) {
  double lo = -kChordClamp, hi = kChordClamp;
  for (const auto& h : body.halfspaces) {
    double a = h.normal[0];
    if (std::abs(a) < 1e-14) {
      if (h.offset < -body.tol) return std::nullopt;
      continue;
    }
    if (a > 0) hi = std::min(hi, h.offset / a);
    else lo = std::max(lo, h.offset / a);
  }
  if (hi - lo <= 0.0) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace grails
