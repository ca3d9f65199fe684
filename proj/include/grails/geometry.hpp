#pragma once

// Convex parameter bodies: halfspace / quadratic-form constraints with a
// membership oracle, chord computation, and an alternating-projection
// interior-point search.  Everything downstream (the samplers and the
// version-space machinery) talks to bodies through this interface.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace grails {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Default absolute slack accepted on any single constraint.
inline constexpr double kMembershipTol = 1e-9;
// Default bisection tolerance for chord endpoints.
inline constexpr double kChordTol = 1e-6;
// Chords are clamped here; bodies are assumed bounded well inside this.
inline constexpr double kChordClamp = 1e12;

// Closed halfspace  normal . z <= offset.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double slack(const Vec& z) const { return normal.dot(z) - offset; }
};

// sqrt(z_S' M z_S) <= bound over a coordinate block S.
// Empty `indices` means all coordinates; empty `form` means the identity.
struct QuadConstraint {
  std::vector<int> indices;
  Mat form;
  double bound = 0.0;

  Vec slice(const Vec& z) const {
    if (indices.empty()) return z;
    Vec s(indices.size());
    for (size_t k = 0; k < indices.size(); ++k) s[k] = z[indices[k]];
    return s;
  }
  double norm(const Vec& z) const {
    Vec s = slice(z);
    if (form.size() == 0) return s.norm();
    return std::sqrt(std::max(0.0, s.dot(form * s)));
  }
};

enum class NormTag { L1, L2, LInf };

// Norm balls that are only exposed through the membership predicate (L1 in
// practice); chords through these fall back to expansion + bisection.
struct GenericNormBall {
  NormTag tag = NormTag::L1;
  double radius = 0.0;
};

struct ParamBody {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
  std::vector<QuadConstraint> quads;
  std::optional<GenericNormBall> generic;
  double tol = kMembershipTol;
};

inline double generic_norm(NormTag tag, const Vec& z) {
  switch (tag) {
    case NormTag::L1: return z.lpNorm<1>();
    case NormTag::L2: return z.norm();
    default: return z.lpNorm<Eigen::Infinity>();
  }
}

// ---- factories ----

inline ParamBody make_ball(int dim, NormTag tag, double radius) {
  if (dim <= 0 || radius <= 0.0) throw std::invalid_argument("make_ball: bad shape");
  ParamBody b;
  b.dim = dim;
  if (tag == NormTag::L2) {
    b.quads.push_back({{}, Mat(), radius});
  } else if (tag == NormTag::LInf) {
    for (int i = 0; i < dim; ++i) {
      Vec n = Vec::Zero(dim);
      n[i] = 1.0;
      b.halfspaces.push_back({n, radius});
      b.halfspaces.push_back({-n, radius});
    }
  } else {
    b.generic = GenericNormBall{tag, radius};
  }
  return b;
}

inline ParamBody make_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw std::invalid_argument("make_box: bad shape");
  ParamBody b;
  b.dim = static_cast<int>(lo.size());
  for (int i = 0; i < b.dim; ++i) {
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("make_box: lo > hi");
    Vec n = Vec::Zero(b.dim);
    n[i] = 1.0;
    b.halfspaces.push_back({n, hi[i]});
    b.halfspaces.push_back({-n, -lo[i]});
  }
  return b;
}

// { z : sqrt(z' M z) <= bound } for SPD (possibly degenerate-PSD) M.
inline ParamBody make_ellipsoid(const Mat& M, double bound) {
  ParamBody b;
  b.dim = static_cast<int>(M.rows());
  b.quads.push_back({{}, M, bound});
  return b;
}

inline ParamBody make_polytope(int dim, std::vector<Halfspace> hs) {
  ParamBody b;
  b.dim = dim;
  b.halfspaces = std::move(hs);
  return b;
}

// ---- membership ----

inline bool membership(const ParamBody& body, const Vec& z) {
  if (z.size() != body.dim) throw std::invalid_argument("membership: wrong dimension");
  for (const auto& h : body.halfspaces)
    if (h.slack(z) > body.tol) return false;
  for (const auto& q : body.quads)
    if (q.norm(z) > q.bound + body.tol) return false;
  if (body.generic && generic_norm(body.generic->tag, z) > body.generic->radius + body.tol)
    return false;
  return true;
}

// ---- chords ----

// Endpoints (t_minus, t_plus) of { t : p + t*dir in body }.  Halfspace and
// quadratic constraints are clipped in closed form; a generic norm ball is
// bracketed by exponential expansion and resolved by bisection to `tol`.
inline std::pair<double, double> chord_endpoints(const ParamBody& body, const Vec& p,
                                                 const Vec& dir, double tol = kChordTol) {
  if (!membership(body, p)) throw std::invalid_argument("chord_endpoints: point not in body");
  double lo = -kChordClamp, hi = kChordClamp;
  for (const auto& h : body.halfspaces) {
    double a = h.normal.dot(dir);
    double c = h.offset - h.normal.dot(p);
    if (std::abs(a) < 1e-14) continue;  // line parallel to the face
    double t = c / a;
    if (a > 0) hi = std::min(hi, t);
    else lo = std::max(lo, t);
  }
  for (const auto& q : body.quads) {
    Vec ps = q.slice(p), ds = q.slice(dir);
    Vec Mp = q.form.size() ? Vec(q.form * ps) : ps;
    Vec Md = q.form.size() ? Vec(q.form * ds) : ds;
    double A = ds.dot(Md), B = 2.0 * ps.dot(Md), C = ps.dot(Mp) - q.bound * q.bound;
    if (A < 1e-18) {
      // direction (numerically) in the null space of the form: linear in t
      if (std::abs(B) > 1e-14) {
        double t = -C / B;
        if (B > 0) hi = std::min(hi, t);
        else lo = std::max(lo, t);
      }
      continue;
    }
    double disc = std::max(0.0, B * B - 4.0 * A * C);
    double s = std::sqrt(disc);
    lo = std::max(lo, (-B - s) / (2.0 * A));
    hi = std::min(hi, (-B + s) / (2.0 * A));
  }
  if (body.generic) {
    auto inside = [&](double t) {
      return generic_norm(body.generic->tag, p + t * dir) <= body.generic->radius + body.tol;
    };
    auto refine = [&](double sign, double cap) {
      // expand until outside (or past the analytic cap), then bisect
      double in = 0.0, step = std::max(tol, 1e-3);
      while (in + step < cap && inside(sign * (in + step))) { in += step; step *= 2.0; }
      double out = std::min(in + step, cap);
      if (out >= cap && inside(sign * cap)) return cap;
      while (out - in > tol) {
        double mid = 0.5 * (in + out);
        (inside(sign * mid) ? in : out) = mid;
      }
      return in;
    };
    hi = refine(1.0, hi);
    lo = -refine(-1.0, -lo);
  }
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  return {lo, hi};
}

// ---- interior point search ----

struct InteriorPointOpts {
  int max_iters = 500;
  int restarts = 20;
  double margin = 1e-7;  // distance pulled inside each projected constraint
  double relax = 1.7;    // over-relaxation factor for halfspace projections
};

namespace detail {

inline double body_scale(const ParamBody& body) {
  double s = 1.0;
  for (const auto& q : body.quads) s = std::min(s, q.bound);
  if (body.generic) s = std::min(s, body.generic->radius);
  return s;
}

}  // namespace detail

// Alternating projections: repeatedly project onto the most recently violated
// constraint (halfspaces exactly, norm constraints by scaling along the ray to
// the origin), restarting from fresh random points on failure.  An optional
// start point (e.g. a witness that a new constraint just invalidated) is
// tried first: it is usually nearly feasible and converges in a few steps.
inline std::optional<Vec> find_interior_point(const ParamBody& body, Rng& rng,
                                              const InteriorPointOpts& opts = {},
                                              const Vec* start = nullptr) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double scale = detail::body_scale(body);
  for (int attempt = 0; attempt < opts.restarts; ++attempt) {
    Vec z(body.dim);
    if (attempt == 0 && start && start->size() == body.dim) {
      z = *start;
    } else if (attempt <= 1) {
      z.setZero();
    } else {
      for (int i = 0; i < body.dim; ++i) z[i] = gauss(rng) * scale * 0.3;
    }
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      bool ok = true;
      for (const auto& h : body.halfspaces) {
        double s = h.slack(z);
        if (s > body.tol) {
          double nn = h.normal.squaredNorm();
          z -= (opts.relax * (s + opts.margin) / nn) * h.normal;
          ok = false;
        }
      }
      for (const auto& q : body.quads) {
        double nrm = q.norm(z);
        if (nrm > q.bound + body.tol) {
          double target = std::max(q.bound - opts.margin, 0.5 * q.bound);
          if (q.indices.empty()) {
            z *= target / nrm;
          } else {
            for (int idx : q.indices) z[idx] *= target / nrm;
          }
          ok = false;
        }
      }
      if (body.generic) {
        double nrm = generic_norm(body.generic->tag, z);
        if (nrm > body.generic->radius + body.tol) {
          z *= std::max(body.generic->radius - opts.margin, 0.5 * body.generic->radius) / nrm;
          ok = false;
        }
      }
      if (ok) return z;
    }
  }
  return std::nullopt;
}

struct FeasibilityResult {
  bool feasible = false;  // a `false` verdict is one-sided (budget exhausted)
  Vec witness;
};

inline FeasibilityResult feasibility(const ParamBody& body, Rng& rng,
                                     const InteriorPointOpts& opts = {}) {
  auto w = find_interior_point(body, rng, opts);
  if (w) return {true, *w};
  return {false, Vec()};
}

}  // namespace grails
