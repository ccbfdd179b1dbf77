#include "autorvo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "autorvo/errors.hpp"

namespace autorvo::geometry {

namespace {

// Envelope E(u) = max_i (a_i . u + r_i) over the unit circle, with a_i the disk
// centers relative to the query point.
double envelope(std::span<const Disk> disks, Vec2 q, Vec2 u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Disk& d : disks) {
    best = std::max(best, dot(d.center - q, u) + d.radius);
  }
  return best;
}

// min_u E(u). The minimum of an upper envelope of shifted cosines sits either
// at the bottom of one active term (u = -a_i/|a_i|) or where two terms cross,
// so evaluating E on those directions is exact.
double min_envelope(std::span<const Disk> disks, Vec2 q) {
  double best = envelope(disks, q, {1.0, 0.0});
  const std::size_t n = disks.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 ai = disks[i].center - q;
    const double len = norm(ai);
    if (len > 0.0) best = std::min(best, envelope(disks, q, ai * (-1.0 / len)));
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 d = disks[i].center - disks[j].center;
      const double dl = norm(d);
      if (dl <= 0.0) continue;
      const double along = (disks[j].radius - disks[i].radius) / dl;
      if (along < -1.0 || along > 1.0) continue;
      const Vec2 base = d / dl;
      const double across = std::sqrt(std::max(0.0, 1.0 - along * along));
      best = std::min(best, envelope(disks, q, base * along + perp(base) * across));
      best = std::min(best, envelope(disks, q, base * along - perp(base) * across));
    }
  }
  return best;
}

DiskHull piece_pair_hull(const ConvexPiece& p, const ConvexPiece& q, bool reflect_p) {
  DiskHull hull;
  const double sign = reflect_p ? -1.0 : 1.0;
  for (const Disk& dp : p.disks) {
    for (const Disk& dq : q.disks) {
      hull.push_unique({dp.center * sign + dq.center, dp.radius + dq.radius});
    }
  }
  return hull;
}

double bounds_gap(const CtmatShape& a, const CtmatShape& b) {
  return distance(a.bound_center(), b.bound_center()) - a.bound_radius() - b.bound_radius();
}

}  // namespace

void DiskHull::push_unique(const Disk& d) {
  for (std::uint8_t i = 0; i < count; ++i) {
    if (disks[i] == d) return;
  }
  disks[count++] = d;
}

CtmatShape::CtmatShape(std::vector<Disk> disks, Vec2 reference_offset)
    : disks_(std::move(disks)), reference_offset_(reference_offset) {
  if (disks_.empty()) throw ValidationError("shape needs at least one disk");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Disk& d : disks_) {
    if (!std::isfinite(d.center.x) || !std::isfinite(d.center.y) || !std::isfinite(d.radius)) {
      throw ValidationError("disk has non-finite values");
    }
    if (d.radius < 0.0) throw ValidationError("disk radius must be >= 0");
    lo = std::min(lo, d.center.y - d.radius);
    hi = std::max(hi, d.center.y + d.radius);
  }
  width_ = hi - lo;
  rebuild_pieces();
  rebuild_bounds();
}

void CtmatShape::rebuild_pieces() {
  pieces_.clear();
  if (disks_.size() == 1) {
    pieces_.push_back({{disks_[0], disks_[0]}});
    return;
  }
  for (std::size_t i = 0; i + 1 < disks_.size(); ++i) {
    pieces_.push_back({{disks_[i], disks_[i + 1]}});
  }
}

void CtmatShape::rebuild_bounds() {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (const Disk& d : disks_) {
    lo = {std::min(lo.x, d.center.x - d.radius), std::min(lo.y, d.center.y - d.radius)};
    hi = {std::max(hi.x, d.center.x + d.radius), std::max(hi.y, d.center.y + d.radius)};
  }
  bound_center_ = (lo + hi) * 0.5;
  bound_radius_ = 0.0;
  for (const Disk& d : disks_) {
    bound_radius_ = std::max(bound_radius_, distance(d.center, bound_center_) + d.radius);
  }
}

double CtmatShape::min_forward() const {
  double v = std::numeric_limits<double>::infinity();
  for (const Disk& d : disks_) v = std::min(v, d.center.x - d.radius);
  return v;
}

double CtmatShape::max_forward() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const Disk& d : disks_) v = std::max(v, d.center.x + d.radius);
  return v;
}

CtmatShape place_shape(const CtmatShape& shape, const Pose& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  auto transform = [&](Vec2 local) {
    const Vec2 r = local - shape.reference_offset();
    return Vec2{pose.position.x + c * r.x - s * r.y, pose.position.y + s * r.x + c * r.y};
  };
  CtmatShape out;
  out.disks_.reserve(shape.disks_.size());
  for (const Disk& d : shape.disks_) out.disks_.push_back({transform(d.center), d.radius});
  out.width_ = shape.width_;
  out.reference_offset_ = pose.position;
  out.rebuild_pieces();
  out.bound_center_ = transform(shape.bound_center_);
  out.bound_radius_ = shape.bound_radius_;
  return out;
}

MinkowskiSumShape minkowski_sum(const CtmatShape& a, const CtmatShape& b, bool reflect_a) {
  MinkowskiSumShape sum;
  sum.pieces.reserve(a.pieces().size() * b.pieces().size());
  for (const ConvexPiece& pa : a.pieces()) {
    for (const ConvexPiece& pb : b.pieces()) {
      sum.pieces.push_back(piece_pair_hull(pa, pb, reflect_a));
    }
  }
  return sum;
}

double hull_signed_distance(std::span<const Disk> disks, Vec2 point) {
  return -min_envelope(disks, point);
}

bool hull_contains(std::span<const Disk> disks, Vec2 point) {
  for (const Disk& d : disks) {
    if (norm(d.center - point) <= d.radius + kEpsilon) return true;
  }
  if (disks.size() == 1) return false;
  return hull_signed_distance(disks, point) <= kEpsilon;
}

bool contains_point(const MinkowskiSumShape& s, Vec2 point) {
  return std::any_of(s.pieces.begin(), s.pieces.end(),
                     [&](const DiskHull& h) { return hull_contains(h.view(), point); });
}

bool contains_origin(const MinkowskiSumShape& s) { return contains_point(s, {0.0, 0.0}); }

double signed_distance_point(const MinkowskiSumShape& s, Vec2 point) {
  double best = std::numeric_limits<double>::infinity();
  for (const DiskHull& h : s.pieces) best = std::min(best, hull_signed_distance(h.view(), point));
  return best;
}

double signed_distance_origin(const MinkowskiSumShape& s) {
  return signed_distance_point(s, {0.0, 0.0});
}

TangentInterval tangent_angles(Vec2 viewpoint, const CtmatShape& shape) {
  if (point_signed_distance(viewpoint, shape) <= kEpsilon) {
    throw ViewpointInsideShape("viewpoint lies inside the shape");
  }
  TangentInterval out;
  double prev_bearing = 0.0;
  bool first = true;
  for (const Disk& d : shape.disks()) {
    const Vec2 rel = d.center - viewpoint;
    const double dist = norm(rel);
    double b = bearing(rel);
    if (!first) b = prev_bearing + wrap_angle(b - prev_bearing);
    prev_bearing = b;
    const double half = std::asin(std::min(1.0, d.radius / dist));
    const double reach = std::sqrt(std::max(0.0, dist * dist - d.radius * d.radius));
    const double lo = b - half;
    const double hi = b + half;
    if (first || lo < out.lo) {
      out.lo = lo;
      out.lo_point = viewpoint + unit_from_angle(lo) * reach;
    }
    if (first || hi > out.hi) {
      out.hi = hi;
      out.hi_point = viewpoint + unit_from_angle(hi) * reach;
    }
    first = false;
  }
  return out;
}

double point_signed_distance(Vec2 point, const CtmatShape& shape) {
  double best = std::numeric_limits<double>::infinity();
  for (const ConvexPiece& p : shape.pieces()) {
    const std::size_t n = p.disks[0] == p.disks[1] ? 1 : 2;
    best = std::min(best, hull_signed_distance({p.disks.data(), n}, point));
  }
  return best;
}

double shape_signed_distance(const CtmatShape& a, const CtmatShape& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const ConvexPiece& pa : a.pieces()) {
    for (const ConvexPiece& pb : b.pieces()) {
      const DiskHull h = piece_pair_hull(pa, pb, true);
      best = std::min(best, hull_signed_distance(h.view(), {0.0, 0.0}));
    }
  }
  return best;
}

bool shapes_within(const CtmatShape& a, const CtmatShape& b, double margin) {
  if (bounds_gap(a, b) > margin + kEpsilon) return false;
  for (const ConvexPiece& pa : a.pieces()) {
    for (const ConvexPiece& pb : b.pieces()) {
      const DiskHull h = piece_pair_hull(pa, pb, true);
      if (margin <= 0.0) {
        if (hull_contains(h.view(), {0.0, 0.0})) return true;
      } else if (hull_signed_distance(h.view(), {0.0, 0.0}) <= margin + kEpsilon) {
        return true;
      }
    }
  }
  return false;
}

bool shapes_overlap(const CtmatShape& a, const CtmatShape& b) { return shapes_within(a, b, 0.0); }

}  // namespace autorvo::geometry
