#pragma once

// Independent reference computations used by the tests. None of these touch
// the library's support-function code: a convex piece is treated as the union
// of the disks interpolated between its two end disks, and distances come from
// nested golden-section searches over the interpolation parameters (the objectives
// are convex in them).

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "autorvo/geometry.hpp"

namespace oracle {

using autorvo::Vec2;
using autorvo::geometry::Disk;

inline Disk lerp_disk(const Disk& a, const Disk& b, double t) {
  return {a.center + (b.center - a.center) * t, a.radius + (b.radius - a.radius) * t};
}

/// Minimum of a convex function on [0, 1] by golden-section search.
template <class F>
double convex_min(F&& f, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return std::min({f1, f2, f(0.0), f(1.0)});
}

inline std::vector<std::pair<Disk, Disk>> pieces(const std::vector<Disk>& chain) {
  std::vector<std::pair<Disk, Disk>> out;
  if (chain.size() == 1) out.push_back({chain[0], chain[0]});
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.push_back({chain[i], chain[i + 1]});
  return out;
}

/// min over the chain of |q - c(t)| - r(t). Equals the Euclidean distance for
/// points outside; negative exactly when q is inside.
inline double point_gap(const std::vector<Disk>& chain, Vec2 q) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pieces(chain)) {
    best = std::min(best, convex_min([&](double t) {
                      const Disk d = lerp_disk(a, b, t);
                      return autorvo::distance(q, d.center) - d.radius;
                    }));
  }
  return best;
}

/// min over the chain of dist(half-line, c(t)) - r(t); <= 0 iff the ray hits.
inline double ray_gap(const std::vector<Disk>& chain, Vec2 origin, Vec2 dir) {
  auto seg_dist = [&](Vec2 p) {
    const double t = std::max(0.0, autorvo::dot(p - origin, dir));
    return autorvo::distance(p, origin + dir * t);
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : pieces(chain)) {
    best = std::min(best, convex_min([&](double t) {
                      const Disk d = lerp_disk(a, b, t);
                      return seg_dist(d.center) - d.radius;
                    }));
  }
  return best;
}

/// min over piece pairs of |c_a(s) - c_b(t)| - r_a(s) - r_b(t). Equals the
/// separation distance when apart; negative exactly when the shapes overlap.
inline double shape_gap(const std::vector<Disk>& a, const std::vector<Disk>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a0, a1] : pieces(a)) {
    for (const auto& [b0, b1] : pieces(b)) {
      best = std::min(best, convex_min([&](double s) {
                        const Disk da = lerp_disk(a0, a1, s);
                        return convex_min([&](double t) {
                          const Disk db = lerp_disk(b0, b1, t);
                          return autorvo::distance(da.center, db.center) - da.radius - db.radius;
                        }, 48);
                      }, 48));
    }
  }
  return best;
}

/// Brute-force membership by sampling the interpolation parameter densely.
inline bool sampled_contains(const std::vector<Disk>& chain, Vec2 q, int samples = 2000) {
  for (const auto& [a, b] : pieces(chain)) {
    for (int i = 0; i <= samples; ++i) {
      const Disk d = lerp_disk(a, b, static_cast<double>(i) / samples);
      if (autorvo::distance(q, d.center) <= d.radius) return true;
    }
  }
  return false;
}

/// Random chain of 1..4 disks roughly along the x axis, then rotated/translated.
inline std::vector<Disk> random_chain(std::mt19937_64& rng, double spread = 3.0) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = count(rng);
  const double theta = u(rng) * 2 * M_PI;
  const Vec2 origin{(u(rng) - 0.5) * spread, (u(rng) - 0.5) * spread};
  std::vector<Disk> out;
  double x = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 local{x, (u(rng) - 0.5) * 0.6};
    out.push_back({origin + autorvo::rotate(local, theta), 0.1 + 0.8 * u(rng)});
    x += 0.3 + 1.2 * u(rng);
  }
  return out;
}

inline std::vector<Disk> world_disks(const autorvo::geometry::CtmatShape& placed) {
  return placed.disks();
}

}  // namespace oracle
