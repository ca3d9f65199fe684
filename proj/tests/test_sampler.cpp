#include <doctest.h>

#include <algorithm>

#include "grails/sampler.hpp"

using namespace grails;

namespace {

// one-sample KS distance against a CDF
double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  size_t n = xs.size();
  for (size_t i = 0; i < n; ++i) {
    double F = cdf(xs[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(F - static_cast<double>(i + 1) / n));
  }
  return d;
}

// [DERIVED] marginal CDF of one coordinate of the uniform distribution on the
// 2-D unit disk: F(x) = 1/2 + (x sqrt(1-x^2) + asin x) / pi
double disk_marginal_cdf(double x) {
  x = std::clamp(x, -1.0, 1.0);
  return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / M_PI;
}

}  // namespace

TEST_CASE("hit-and-run marginals: unit box and unit disk pass KS at 1%") {
  // KS critical value at the 1% level for n samples is ~1.63 / sqrt(n)
  const int n_samples = 10000;
  const double crit = 1.63 / std::sqrt(static_cast<double>(n_samples));
  Rng rng(42);

  ParamBody box = make_box(Vec::Constant(2, 0.0), Vec::Constant(2, 1.0));
  auto box_samples = hit_and_run_sample(box, Vec::Constant(2, 0.5), n_samples, rng);
  for (int coord = 0; coord < 2; ++coord) {
    std::vector<double> xs;
    for (const auto& s : box_samples) xs.push_back(s[coord]);
    CHECK(ks_distance(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }) < crit);
  }

  ParamBody disk = make_ball(2, NormTag::L2, 1.0);
  auto disk_samples = hit_and_run_sample(disk, Vec::Zero(2), n_samples, rng);
  for (int coord = 0; coord < 2; ++coord) {
    std::vector<double> xs;
    for (const auto& s : disk_samples) xs.push_back(s[coord]);
    CHECK(ks_distance(xs, disk_marginal_cdf) < crit);
  }
}

TEST_CASE("chains are deterministic under the seed and stay inside the body") {
  ParamBody ball = make_ball(3, NormTag::L2, 2.0);
  Rng a(123), b(123);
  auto sa = hit_and_run_sample(ball, Vec::Zero(3), 50, a);
  auto sb = hit_and_run_sample(ball, Vec::Zero(3), 50, b);
  for (int i = 0; i < 50; ++i) {
    CHECK((sa[i] - sb[i]).norm() == 0.0);
    CHECK(membership(ball, sa[i]));
  }
  CHECK_THROWS_AS(HitAndRunChain(&ball, Vec::Constant(3, 5.0)), std::invalid_argument);
}

TEST_CASE("estimate_event sample count arithmetic") {
  // [DERIVED] ceil(2 eps^-2 log(1/delta)):
  //   eps = 0.1, delta = 0.05 -> ceil(200 * 2.99573...) = 600
  CHECK(estimate_event_sample_count(0.1, 0.05) == 600);
  //   eps = 0.05, delta = 0.01 -> ceil(800 * 4.60517...) = 3685
  CHECK(estimate_event_sample_count(0.05, 0.01) == 3685);
}

TEST_CASE("mixture distribution: interval components and exact weights") {
  // [DERIVED] components [0,1] and [0,2] weighted 1/2 each; the event
  // "point < 0.5" has probability 0.5 * 0.5 + 0.5 * 0.25 = 0.375
  MixtureDistribution mix;
  mix.add_interval_component(0, {{0, 0.0, 1.0}});
  mix.add_interval_component(1, {{0, 0.0, 2.0}});
  Rng rng(5);
  EventPredicate ev = [](const MixtureDraw& d) { return d.point[0] < 0.5; };
  double est = estimate_event(mix, ev, 0.02, 0.01, rng);
  CHECK(est == doctest::Approx(0.375).epsilon(0.06));

  // arms are carried through the draw
  bool saw0 = false, saw1 = false;
  for (int i = 0; i < 100; ++i) {
    auto d = mix.sample_one(rng);
    if (d.arm == 0) {
      saw0 = true;
      CHECK(d.point[0] <= 1.0);
    }
    if (d.arm == 1) saw1 = true;
  }
  CHECK(saw0);
  CHECK(saw1);

  // zero-length components are dropped
  MixtureDistribution empty_mix;
  empty_mix.add_interval_component(0, {{0, 1.0, 1.0}});
  CHECK(empty_mix.empty());
}

TEST_CASE("mixture distribution: chain component respects the body") {
  MixtureDistribution mix;
  ParamBody ball = make_ball(2, NormTag::L2, 1.0);
  mix.add_chain_component(3, 0, ball, Vec::Zero(2));
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    auto d = mix.sample_one(rng);
    CHECK(d.arm == 3);
    CHECK(d.point.norm() <= 1.0 + kMembershipTol);
  }
}

TEST_CASE("multiplicative estimator: bracketing and the zero floor") {
  MixtureDistribution mix;
  mix.add_interval_component(0, {{0, 0.0, 1.0}});
  Rng rng(17);
  // true probability 0.5: anytime returns must satisfy |mu - p| <= p/2 whp
  for (int trial = 0; trial < 50; ++trial) {
    EventPredicate ev = [](const MixtureDraw& d) { return d.point[0] < 0.5; };
    double mu = estimate_event_mult(mix, ev, 0.5, 0.01, 0.01, rng);
    CHECK(mu >= 0.25);
    CHECK(mu <= 0.75);
  }
  // impossible event: the radius eventually drops below floor/2 and we get 0
  EventPredicate never = [](const MixtureDraw&) { return false; };
  CHECK(estimate_event_mult(mix, never, 0.5, 0.01, 0.05, rng) == 0.0);
}

TEST_CASE("multiplicative radius decreases in s") {
  CHECK(estimate_event_mult_radius(10, 0.05) > estimate_event_mult_radius(100, 0.05));
  CHECK(estimate_event_mult_radius(100, 0.05) > estimate_event_mult_radius(10000, 0.05));
}
