#pragma once

// Brute-force combinatorial dimension oracles for small finite classes, plus
// the exact minimax best-arm game and a Monte-Carlo minimum-margin estimate.
// All scans carry explicit size guards and throw rather than silently
// truncating the search.

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "grails/grails.hpp"

namespace grails {

namespace dims_detail {

inline void check_guard(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("dims guard exceeded: ") + what);
}

// all labelings g in Y^n via a mixed-radix counter; calls fn(g as indices)
template <typename Fn>
void for_each_labeling(int n, int ylen, Fn&& fn) {
  std::vector<int> g(n, 0);
  for (;;) {
    fn(g);
    int k = 0;
    while (k < n && ++g[k] == ylen) g[k++] = 0;
    if (k == n) return;
  }
}

struct ClassMasks {
  int m = 0, n = 0;
  std::vector<uint32_t> good;    // per arm: functions for which the arm is eps-good
  std::vector<uint32_t> argmin;  // per arm: functions for which the arm is an argmin
  Mat rounded_idx;               // grid index of each value
  std::vector<std::vector<uint32_t>> agree;  // [arm][label index] -> function mask

  ClassMasks(const FiniteClass& fin, const OutputGrid& grid, double eps)
      : m(fin.size()), n(fin.n()), good(n, 0), argmin(n, 0), rounded_idx(m, n),
        agree(n, std::vector<uint32_t>(grid.size(), 0)) {
    for (int f = 0; f < m; ++f) {
      double mn = fin.values.row(f).minCoeff();
      for (int i = 0; i < n; ++i) {
        int yi = grid.round_index(fin.values(f, i));
        rounded_idx(f, i) = yi;
        agree[i][yi] |= 1u << f;
        if (fin.values(f, i) <= mn + eps) good[i] |= 1u << f;
        if (fin.values(f, i) <= mn) argmin[i] |= 1u << f;
      }
    }
  }

  // functions consistent with labeling g (grid indices) on measurement set I
  uint32_t consistent(const std::vector<int>& g, uint32_t I) const {
    uint32_t out = (m == 32) ? ~0u : ((1u << m) - 1);
    for (int i = 0; i < n && out; ++i)
      if (I & (1u << i)) out &= agree[i][g[i]];
    return out;
  }
};

}  // namespace dims_detail

// Smallest worst-case number of measurements that certifies some arm as
// eps-good: max over labelings g of the minimum |I| such that every function
// consistent with g on I shares an eps-good arm (vacuously certified when the
// consistent set is empty).
inline int upsilon_best(const FiniteClass& fin, const OutputGrid& grid, double eps) {
  using namespace dims_detail;
  int n = fin.n(), m = fin.size(), ylen = grid.size();
  check_guard(n <= 14, "upsilon: n <= 14");
  check_guard(m <= 32, "upsilon: |F| <= 32");
  check_guard(std::pow(static_cast<double>(ylen), n) <= 1e6 + 0.5, "upsilon: |Y|^n <= 1e6");
  ClassMasks cm(fin, grid, eps);

  // subsets ordered by size for the breadth-first certificate search
  std::vector<uint32_t> subsets;
  for (uint32_t I = 0; I < (1u << n); ++I) subsets.push_back(I);
  std::sort(subsets.begin(), subsets.end(),
            [](uint32_t a, uint32_t b) { return std::popcount(a) < std::popcount(b); });

  auto certified = [&](uint32_t consistent_set) {
    if (consistent_set == 0) return true;
    for (int j = 0; j < n; ++j)
      if ((consistent_set & ~cm.good[j]) == 0) return true;
    return false;
  };

  int best = 0;
  for_each_labeling(n, ylen, [&](const std::vector<int>& g) {
    for (uint32_t I : subsets) {
      if (certified(cm.consistent(g, I))) {
        best = std::max(best, std::popcount(I));
        return;
      }
    }
    best = n;  // unreachable: I = [n] always certifies or empties
  });
  return best;
}

// Loss analogue: max over g of the cheapest certified measurement set, priced
// by the sum of g over the set minus its most expensive element.
inline double upsilon_loss(const FiniteClass& fin, const OutputGrid& grid) {
  using namespace dims_detail;
  int n = fin.n(), m = fin.size(), ylen = grid.size();
  check_guard(n <= 14, "upsilon: n <= 14");
  check_guard(m <= 32, "upsilon: |F| <= 32");
  check_guard(std::pow(static_cast<double>(ylen), n) <= 1e6 + 0.5, "upsilon: |Y|^n <= 1e6");
  ClassMasks cm(fin, grid, 0.0);

  auto certified = [&](uint32_t consistent_set) {
    if (consistent_set == 0) return true;
    for (int j = 0; j < n; ++j)
      if ((consistent_set & ~cm.argmin[j]) == 0) return true;
    return false;
  };

  double worst = -kInf;
  for_each_labeling(n, ylen, [&](const std::vector<int>& g) {
    double cheapest = kInf;
    for (uint32_t I = 0; I < (1u << n); ++I) {
      if (!certified(cm.consistent(g, I))) continue;
      double sum = 0.0, mx = -kInf;
      for (int i = 0; i < n; ++i)
        if (I & (1u << i)) {
          sum += grid.values[g[i]];
          mx = std::max(mx, grid.values[g[i]]);
        }
      double cost = I == 0 ? 0.0 : sum - mx;  // drop the final measurement
      cheapest = std::min(cheapest, cost);
    }
    worst = std::max(worst, cheapest);
  });
  return worst;
}

// Classification analogue: certificate is that at most one function remains.
inline int upsilon_class(const FiniteClass& fin, const OutputGrid& grid) {
  using namespace dims_detail;
  int n = fin.n(), m = fin.size(), ylen = grid.size();
  check_guard(n <= 14, "upsilon: n <= 14");
  check_guard(m <= 32, "upsilon: |F| <= 32");
  check_guard(std::pow(static_cast<double>(ylen), n) <= 1e6 + 0.5, "upsilon: |Y|^n <= 1e6");
  ClassMasks cm(fin, grid, 0.0);

  std::vector<uint32_t> subsets;
  for (uint32_t I = 0; I < (1u << n); ++I) subsets.push_back(I);
  std::sort(subsets.begin(), subsets.end(),
            [](uint32_t a, uint32_t b) { return std::popcount(a) < std::popcount(b); });

  int best = 0;
  for_each_labeling(n, ylen, [&](const std::vector<int>& g) {
    for (uint32_t I : subsets) {
      if (std::popcount(cm.consistent(g, I)) <= 1) {
        best = std::max(best, std::popcount(I));
        return;
      }
    }
    best = n;
  });
  return best;
}

// Haystack dimension: HD(F) = 1 / inf over nonempty subsets F' of
// gamma(F') = max_i min_y |F'(x_i) union F'((x_i, y))| / |F'|.
inline double haystack_dimension(const FiniteClass& fin, const OutputGrid& grid) {
  int m = fin.size(), n = fin.n(), ylen = grid.size();
  dims_detail::check_guard(m <= 16, "haystack: |F| <= 16");
  std::vector<uint32_t> best_mask(n, 0);
  std::vector<std::vector<uint32_t>> dis(n, std::vector<uint32_t>(ylen, 0));
  for (int f = 0; f < m; ++f) {
    double mn = fin.values.row(f).minCoeff();
    for (int i = 0; i < n; ++i) {
      if (fin.values(f, i) <= mn) best_mask[i] |= 1u << f;
      int yi = grid.round_index(fin.values(f, i));
      for (int y = 0; y < ylen; ++y)
        if (y != yi) dis[i][y] |= 1u << f;
    }
  }
  double inf_gamma = kInf;
  for (uint32_t S = 1; S < (1u << m); ++S) {
    int sz = std::popcount(S);
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
      int worst_y = sz + 1;
      for (int y = 0; y < ylen; ++y)
        worst_y = std::min(worst_y, std::popcount((best_mask[i] | dis[i][y]) & S));
      best_i = std::max(best_i, worst_y);
    }
    inf_gamma = std::min(inf_gamma, static_cast<double>(best_i) / sz);
  }
  return 1.0 / inf_gamma;
}

// Exact minimax query complexity of eps-good-arm identification: the value of
// the game where the learner picks arms and the adversary picks consistent
// labels, memoized on (surviving set, queried set).
inline int minimax_best_arm(const FiniteClass& fin, const OutputGrid& grid, double eps) {
  int m = fin.size(), n = fin.n(), ylen = grid.size();
  dims_detail::check_guard(m <= 12, "minimax: |F| <= 12");
  dims_detail::check_guard(n <= 8, "minimax: n <= 8");
  dims_detail::ClassMasks cm(fin, grid, eps);
  std::vector<std::vector<uint32_t>> agree(n, std::vector<uint32_t>(ylen, 0));
  for (int f = 0; f < m; ++f)
    for (int i = 0; i < n; ++i) agree[i][static_cast<int>(cm.rounded_idx(f, i))] |= 1u << f;

  std::unordered_map<uint64_t, int> memo;
  std::function<int(uint32_t, uint32_t)> value = [&](uint32_t S, uint32_t queried) -> int {
    for (int j = 0; j < n; ++j)
      if ((S & ~cm.good[j]) == 0) return 0;  // a common eps-good arm exists
    uint64_t key = (static_cast<uint64_t>(S) << 16) | queried;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    int best = m + n;  // upper bound placeholder
    for (int i = 0; i < n; ++i) {
      if (queried & (1u << i)) continue;
      int adversary = 0;
      for (int y = 0; y < ylen; ++y) {
        uint32_t next = S & agree[i][y];
        if (next == 0) continue;
        adversary = std::max(adversary, value(next, queried | (1u << i)));
      }
      best = std::min(best, 1 + adversary);
    }
    memo[key] = best;
    return best;
  };
  uint32_t all = (1u << m) - 1;
  return value(all, 0);
}

// Monte-Carlo lower estimate of the minimum rounding margin attained by any
// function consistent with the full label vector.  Returns nullopt when no
// consistent parameter is found within the budget.
inline std::optional<double> minimum_margin(const FunctionClass& fc, const OutputGrid& grid,
                                            const Vec& labels, int budget, Rng& rng,
                                            ChainConfig cfg = {},
                                            InteriorPointOpts opts = {}) {
  std::optional<double> best;
  for (const auto& piece : fc.pieces) {
    ParamBody body = piece.body;
    for (int i = 0; i < fc.n(); ++i) {
      auto [lo, hi] = grid.cell(grid.round_index(labels[i]));
      for (auto& h : halfspaces_for_label(piece.eval, i, lo, hi)) body.halfspaces.push_back(h);
    }
    auto w = find_interior_point(body, rng, opts);
    if (!w) continue;
    HitAndRunChain chain(&body, *w, cfg);
    for (int s = 0; s < budget; ++s) {
      Vec preds = piece.eval.predict(chain.next_sample(rng));
      double margin = kInf;
      for (int i = 0; i < fc.n(); ++i) {
        double yi = grid.round(labels[i]);
        for (double y : grid.values) {
          if (y == yi) continue;
          margin = std::min(margin, std::abs(preds[i] - y) - std::abs(preds[i] - yi));
        }
      }
      if (!best || margin > *best) best = margin;
    }
  }
  return best;
}

}  // namespace grails
