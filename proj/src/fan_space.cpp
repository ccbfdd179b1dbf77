#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "autorvo/errors.hpp"
#include "autorvo/navigation.hpp"

namespace autorvo::nav {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinExtent = 1e-12;

// Occluded bearings relative to the heading, with the tangent points at both ends.
struct Occlusion {
  double lo;
  double hi;
  Vec2 lo_point;
  Vec2 hi_point;
};

double positive_mod(double a, double m) {
  double r = std::fmod(a, m);
  return r < 0.0 ? r + m : r;
}

std::vector<Occlusion> merge(std::vector<Occlusion> in) {
  std::sort(in.begin(), in.end(), [](const Occlusion& a, const Occlusion& b) { return a.lo < b.lo; });
  std::vector<Occlusion> out;
  for (const Occlusion& o : in) {
    if (!out.empty() && o.lo <= out.back().hi) {
      if (o.hi > out.back().hi) {
        out.back().hi = o.hi;
        out.back().hi_point = o.hi_point;
      }
    } else {
      out.push_back(o);
    }
  }
  return out;
}

// w_i: distance of a bounding point to the bisector line. Past a half-angle of
// pi/2 the fan opens behind the viewpoint and the width saturates.
double side_width(double dist, double half) { return dist * std::sin(std::min(half, kPi / 2)); }

FanSpace make_fan(Vec2 viewpoint, double heading, double rel_right, double rel_left,
                  Vec2 right_point, Vec2 left_point, bool right_window, bool left_window,
                  bool unbounded) {
  FanSpace f;
  f.right_angle = heading + rel_right;
  f.left_angle = heading + rel_left;
  const double half = 0.5 * (rel_left - rel_right);
  f.half_angle_left = half;
  f.half_angle_right = half;
  f.bisector = unit_from_angle(f.right_angle + half);
  f.bounding_points = {right_point, left_point};
  f.boundary_distance = {distance(right_point, viewpoint), distance(left_point, viewpoint)};
  f.from_window = {right_window, left_window};
  f.width = unbounded ? std::numeric_limits<double>::infinity()
                      : side_width(f.boundary_distance[0], half) +
                            side_width(f.boundary_distance[1], half);
  return f;
}

// Clearance of a bounding point at distance `dist` from a ray making `angle`
// with the ray through that point.
double ray_clearance(double dist, double angle) {
  return angle >= kPi / 2 ? dist : dist * std::sin(angle);
}

}  // namespace

bool FanSpace::contains(Vec2 direction) const {
  if (extent() >= kTwoPi - kMinExtent) return true;
  const double rel = positive_mod(bearing(direction) - right_angle, kTwoPi);
  return rel <= extent() + 1e-12 || rel >= kTwoPi - 1e-12;
}

std::vector<FanSpace> compute_fan_spaces(Vec2 viewpoint, double heading,
                                         std::optional<double> window_half,
                                         std::span<const geometry::CtmatShape> occluders,
                                         double detection_radius) {
  std::vector<Occlusion> raw;
  for (const auto& shape : occluders) {
    geometry::TangentInterval ti;
    try {
      ti = geometry::tangent_angles(viewpoint, shape);
    } catch (const ViewpointInsideShape&) {
      return {};
    }
    const double span = ti.hi - ti.lo;
    if (span >= kTwoPi) return {};
    if (window_half) {
      const double lo = wrap_angle(ti.lo - heading);
      raw.push_back({lo, lo + span, ti.lo_point, ti.hi_point});
      if (lo + span > kPi) raw.push_back({lo - kTwoPi, lo + span - kTwoPi, ti.lo_point, ti.hi_point});
    } else {
      const double lo = positive_mod(ti.lo - heading, kTwoPi);
      if (lo + span > kTwoPi) {
        raw.push_back({lo, kTwoPi, ti.lo_point, ti.hi_point});
        raw.push_back({0.0, lo + span - kTwoPi, ti.lo_point, ti.hi_point});
      } else {
        raw.push_back({lo, lo + span, ti.lo_point, ti.hi_point});
      }
    }
  }

  std::vector<FanSpace> fans;
  if (window_half) {
    const double hw = std::min(*window_half, kPi - 1e-9);
    const Vec2 right_vertex = viewpoint + unit_from_angle(heading - hw) * detection_radius;
    const Vec2 left_vertex = viewpoint + unit_from_angle(heading + hw) * detection_radius;
    std::vector<Occlusion> occ;
    for (const Occlusion& o : merge(std::move(raw))) {
      if (o.hi < -hw || o.lo > hw) continue;
      occ.push_back(o);
    }
    if (occ.empty()) {
      fans.push_back(make_fan(viewpoint, heading, -hw, hw, right_vertex, left_vertex, true, true, true));
      return fans;
    }
    double cursor = -hw;
    Vec2 cursor_point = right_vertex;
    bool cursor_window = true;
    for (const Occlusion& o : occ) {
      if (o.lo > cursor + kMinExtent) {
        fans.push_back(make_fan(viewpoint, heading, cursor, o.lo, cursor_point, o.lo_point,
                                cursor_window, false, false));
      }
      if (o.hi > cursor) {
        cursor = o.hi;
        cursor_point = o.hi_point;
        cursor_window = false;
      }
    }
    if (hw > cursor + kMinExtent) {
      fans.push_back(make_fan(viewpoint, heading, cursor, hw, cursor_point, left_vertex,
                              cursor_window, true, false));
    }
    return fans;
  }

  // Full circle.
  if (raw.empty()) {
    const Vec2 back = viewpoint + unit_from_angle(heading + kPi) * detection_radius;
    fans.push_back(make_fan(viewpoint, heading, -kPi, kPi, back, back, true, true, true));
    return fans;
  }
  const std::vector<Occlusion> occ = merge(std::move(raw));
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const Occlusion& cur = occ[i];
    const bool last = i + 1 == occ.size();
    const double next_lo = last ? occ.front().lo + kTwoPi : occ[i + 1].lo;
    const Vec2 next_point = last ? occ.front().lo_point : occ[i + 1].lo_point;
    if (next_lo > cur.hi + kMinExtent) {
      fans.push_back(make_fan(viewpoint, heading, cur.hi, next_lo, cur.hi_point, next_point,
                              false, false, false));
    }
  }
  return fans;
}

std::optional<double> heading_window(const AgentState& agent, const NavConfig& cfg) {
  if (!agent.is_vehicle()) return std::nullopt;
  const auto& dyn = agent.dyn;
  const double yaw = std::abs(agent.speed() * std::tan(dyn.phi_max) / dyn.wheelbase);
  return std::max(yaw * cfg.tau, cfg.min_heading_window);
}

std::vector<FanSpace> compute_fan_spaces(const AgentState& agent,
                                         std::span<const geometry::CtmatShape> occluders,
                                         const NavConfig& cfg) {
  return compute_fan_spaces(agent.reference_point(), agent.heading(), heading_window(agent, cfg),
                            occluders, cfg.detection_radius);
}

bool in_free_space(std::span<const FanSpace> fans, Vec2 h, double agent_width, double sigma) {
  return std::any_of(fans.begin(), fans.end(), [&](const FanSpace& f) {
    return f.width >= sigma * agent_width && f.contains(h);
  });
}

Vec2 preferred_direction(std::span<const FanSpace> fans, Vec2 h, double agent_width,
                         double sigma) {
  if (norm(h) == 0.0) return h;
  std::vector<const FanSpace*> free;
  for (const FanSpace& f : fans) {
    if (f.width >= sigma * agent_width) free.push_back(&f);
  }
  if (free.empty()) return h;
  for (const FanSpace* f : free) {
    if (f->contains(h)) return h;
  }

  // Angular distance from h to each free fan, through its nearer side.
  struct Option {
    double gap;
    const FanSpace* fan;
    int side;  // 0 right, 1 left
  };
  std::vector<Option> options;
  const double hb = bearing(h);
  for (const FanSpace* f : free) {
    const double to_right = std::abs(wrap_angle(hb - f->right_angle));
    const double to_left = std::abs(wrap_angle(hb - f->left_angle));
    options.push_back(to_right <= to_left ? Option{to_right, f, 0} : Option{to_left, f, 1});
  }
  std::stable_sort(options.begin(), options.end(),
                   [](const Option& a, const Option& b) { return a.gap < b.gap; });

  const double half_width = 0.5 * agent_width;
  for (const Option& o : options) {
    const FanSpace& f = *o.fan;
    const double near_dist = f.boundary_distance[o.side];
    const double far_dist = f.boundary_distance[1 - o.side];
    if (near_dist <= half_width) continue;
    const double offset = std::asin(half_width / near_dist);
    if (offset >= f.extent()) continue;
    if (ray_clearance(far_dist, f.extent() - offset) < half_width - 1e-9) continue;
    const double angle = o.side == 0 ? f.right_angle + offset : f.left_angle - offset;
    return unit_from_angle(angle);
  }
  return h;
}

}  // namespace autorvo::nav
