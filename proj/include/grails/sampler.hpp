#pragma once

// Hit-and-run sampling over convex bodies, uniform mixtures of conditioned
// components, and the two event-probability estimators (fixed-budget additive
// and anytime multiplicative).

#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "grails/geometry.hpp"

namespace grails {

struct ChainConfig {
  int burn_in = 50;
  int thinning = 5;
  double chord_tol = kChordTol;
};

// One hit-and-run chain.  The first drawn sample pays the burn-in; subsequent
// samples advance `thinning` steps, so a chain can be kept warm across rounds.
class HitAndRunChain {
 public:
  HitAndRunChain() = default;
  HitAndRunChain(const ParamBody* body, Vec start, ChainConfig cfg = {})
      : body_(body), z_(std::move(start)), cfg_(cfg) {
    if (!membership(*body_, z_)) throw std::invalid_argument("HitAndRunChain: start not in body");
  }

  void step(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec dir(body_->dim);
    for (int i = 0; i < body_->dim; ++i) dir[i] = gauss(rng);
    double n = dir.norm();
    if (n < 1e-300) return;
    dir /= n;
    auto [lo, hi] = chord_endpoints(*body_, z_, dir, cfg_.chord_tol);
    if (hi - lo < 1e-15) return;  // degenerate chord, stay put
    std::uniform_real_distribution<double> u(lo, hi);
    z_ += u(rng) * dir;
  }

  const Vec& state() const { return z_; }

  Vec next_sample(Rng& rng) {
    int steps = warmed_ ? cfg_.thinning : cfg_.burn_in;
    warmed_ = true;
    for (int s = 0; s < steps; ++s) step(rng);
    return z_;
  }

 private:
  const ParamBody* body_ = nullptr;
  Vec z_;
  ChainConfig cfg_;
  bool warmed_ = false;
};

inline std::vector<Vec> hit_and_run_sample(const ParamBody& body, const Vec& start, int count,
                                           Rng& rng, ChainConfig cfg = {}) {
  HitAndRunChain chain(&body, start, cfg);
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(chain.next_sample(rng));
  return out;
}

// A point drawn from one component of a mixture; `piece` identifies which
// piece of a (possibly piecewise) function class the point parameterizes.
struct MixtureDraw {
  int component = -1;
  int arm = -1;
  int piece = 0;
  Vec point;
};

// Uniform mixture over conditioned components.  A component is either backed
// by a persistent hit-and-run chain or, for one-dimensional piecewise bodies,
// by an explicit union of intervals sampled exactly (length-weighted).
class MixtureDistribution {
 public:
  struct IntervalPiece {
    int piece = 0;
    double lo = 0.0, hi = 0.0;
  };

  void add_chain_component(int arm, int piece, ParamBody body, const Vec& witness,
                           ChainConfig cfg = {}) {
    comps_.push_back({arm, piece, std::make_unique<ParamBody>(std::move(body)), {}, 0.0});
    auto& c = comps_.back();
    c.chain = HitAndRunChain(c.body.get(), witness, cfg);
  }

  void add_interval_component(int arm, std::vector<IntervalPiece> segs) {
    double total = 0.0;
    for (const auto& s : segs) total += std::max(0.0, s.hi - s.lo);
    if (total <= 0.0) return;
    comps_.push_back({arm, 0, nullptr, std::move(segs), total});
  }

  size_t size() const { return comps_.size(); }
  bool empty() const { return comps_.empty(); }
  int component_arm(size_t k) const { return comps_[k].arm; }

  MixtureDraw sample_one(Rng& rng) {
    if (comps_.empty()) throw std::logic_error("MixtureDistribution: no components");
    std::uniform_int_distribution<size_t> pick(0, comps_.size() - 1);
    size_t k = pick(rng);
    auto& c = comps_[k];
    MixtureDraw d;
    d.component = static_cast<int>(k);
    d.arm = c.arm;
    if (c.body) {
      d.piece = c.piece;
      d.point = c.chain.next_sample(rng);
    } else {
      std::uniform_real_distribution<double> u(0.0, c.total);
      double r = u(rng);
      for (const auto& s : c.segs) {
        double len = std::max(0.0, s.hi - s.lo);
        if (r <= len || &s == &c.segs.back()) {
          d.piece = s.piece;
          d.point = Vec::Constant(1, s.lo + std::min(r, len));
          break;
        }
        r -= len;
      }
    }
    return d;
  }

  std::vector<MixtureDraw> sample(int count, Rng& rng) {
    std::vector<MixtureDraw> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample_one(rng));
    return out;
  }

 private:
  struct Component {
    int arm = -1;
    int piece = 0;
    std::unique_ptr<ParamBody> body;  // stable address for the chain
    std::vector<IntervalPiece> segs;
    double total = 0.0;
    HitAndRunChain chain;
  };
  std::vector<Component> comps_;
};

using EventPredicate = std::function<bool(const MixtureDraw&)>;

inline long long estimate_event_sample_count(double eps, double delta) {
  return static_cast<long long>(std::ceil(2.0 / (eps * eps) * std::log(1.0 / delta)));
}

// Fixed-budget additive estimator: with probability 1-delta the returned
// frequency is within eps of the true event probability.
inline double estimate_event(MixtureDistribution& mix, const EventPredicate& event, double eps,
                             double delta, Rng& rng) {
  long long n = estimate_event_sample_count(eps, delta);
  long long hits = 0;
  for (long long i = 0; i < n; ++i)
    if (event(mix.sample_one(rng))) ++hits;
  return static_cast<double>(hits) / static_cast<double>(n);
}

inline double estimate_event_mult_radius(long long s, double delta) {
  double t = static_cast<double>(s);
  return std::sqrt(2.0 * std::log(t * t * M_PI * M_PI / (6.0 * delta)) / t);
}

// Anytime multiplicative estimator: keeps sampling while the deviation radius
// exceeds eps * empirical mean; returns 0 once the radius falls below
// floor / 2 (probabilities that small are treated as negligible by callers).
inline double estimate_event_mult(MixtureDistribution& mix, const EventPredicate& event,
                                  double eps, double delta, double floor, Rng& rng) {
  long long s = 0, hits = 0;
  for (;;) {
    ++s;
    if (event(mix.sample_one(rng))) ++hits;
    double mu = static_cast<double>(hits) / static_cast<double>(s);
    double radius = estimate_event_mult_radius(s, delta);
    if (eps * mu >= radius) return mu;
    if (radius < floor / 2.0) return 0.0;
  }
}

}  // namespace grails
