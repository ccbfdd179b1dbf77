#pragma once

// Disk-chain (medial-axis) shapes and the collision geometry built on them.
//
// A shape is an ordered chain of disks; consecutive disks are joined by their
// common tangent segments, so every adjacent pair spans a convex piece equal to
// the convex hull of the two disks. All queries reduce to convex hulls of at
// most four disks, evaluated through their support function
//
//     h(u) = max_i (c_i . u + r_i),
//
// which gives exact signed distances without building boundary polygons.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "autorvo/vec2.hpp"

namespace autorvo::geometry {

/// Absolute tolerance for geometric predicates (meters). Boundaries count as inside.
inline constexpr double kEpsilon = 1e-9;

struct Disk {
  Vec2 center;
  double radius = 0.0;

  bool operator==(const Disk&) const = default;
};

/// Position of the reference point plus heading (radians).
struct Pose {
  Vec2 position;
  double theta = 0.0;
};

/// conv(D1 u D2). A single-disk shape owns one degenerate piece with D1 == D2.
struct ConvexPiece {
  std::array<Disk, 2> disks;
};

/// Convex hull of up to four disks.
struct DiskHull {
  std::array<Disk, 4> disks{};
  std::uint8_t count = 0;

  std::span<const Disk> view() const { return {disks.data(), count}; }
  void push_unique(const Disk& d);
};

class CtmatShape {
 public:
  /// Builds a shape from body-frame disks (x axis = forward). `reference_offset`
  /// is the body-frame location of the agent reference point; defaults to (0,0).
  explicit CtmatShape(std::vector<Disk> disks, Vec2 reference_offset = {});

  const std::vector<Disk>& disks() const { return disks_; }
  std::span<const ConvexPiece> pieces() const { return pieces_; }
  /// Extent perpendicular to the forward axis, fixed at construction.
  double width() const { return width_; }
  Vec2 reference_offset() const { return reference_offset_; }

  Vec2 bound_center() const { return bound_center_; }
  double bound_radius() const { return bound_radius_; }

  /// Extent along the forward axis: [min_i (x_i - r_i), max_i (x_i + r_i)].
  double min_forward() const;
  double max_forward() const;

 private:
  friend CtmatShape place_shape(const CtmatShape&, const Pose&);
  CtmatShape() = default;
  void rebuild_pieces();
  void rebuild_bounds();

  std::vector<Disk> disks_;
  std::vector<ConvexPiece> pieces_;
  double width_ = 0.0;
  Vec2 reference_offset_;
  Vec2 bound_center_;
  double bound_radius_ = 0.0;
};

/// Union of per-piece-pair hulls; the union is kept implicit.
struct MinkowskiSumShape {
  std::vector<DiskHull> pieces;
};

/// Interval of bearings (radians, lo <= hi, unwrapped) covering a shape, plus
/// the tangent points realizing both ends.
struct TangentInterval {
  double lo = 0.0;
  double hi = 0.0;
  Vec2 lo_point;
  Vec2 hi_point;
};

/// Rigid placement: world = pose.position + R(theta) (c - reference_offset).
/// The placed shape's reference offset is the world reference point.
CtmatShape place_shape(const CtmatShape& shape, const Pose& pose);

MinkowskiSumShape minkowski_sum(const CtmatShape& a, const CtmatShape& b, bool reflect_a);

/// Signed distance from `point` to conv(disks): positive outside, minus the
/// penetration depth inside. Requires at least one disk.
double hull_signed_distance(std::span<const Disk> disks, Vec2 point);
bool hull_contains(std::span<const Disk> disks, Vec2 point);

bool contains_point(const MinkowskiSumShape& s, Vec2 point);
bool contains_origin(const MinkowskiSumShape& s);
double signed_distance_point(const MinkowskiSumShape& s, Vec2 point);
double signed_distance_origin(const MinkowskiSumShape& s);

/// Throws ViewpointInsideShape when the viewpoint lies in the (closed) shape.
TangentInterval tangent_angles(Vec2 viewpoint, const CtmatShape& shape);

/// Signed distance from a point to a placed shape (min over pieces).
double point_signed_distance(Vec2 point, const CtmatShape& shape);

/// Signed separation of two placed shapes. Equals
/// signed_distance_origin(minkowski_sum(a, b, true)) without materializing it.
double shape_signed_distance(const CtmatShape& a, const CtmatShape& b);

bool shapes_overlap(const CtmatShape& a, const CtmatShape& b);

/// True when the shapes are closer than `margin` (overlap when margin == 0).
/// Bounding circles prune far pairs before any piece test.
bool shapes_within(const CtmatShape& a, const CtmatShape& b, double margin);

}  // namespace autorvo::geometry
