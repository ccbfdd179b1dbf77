#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "autorvo/geometry.hpp"
#include "autorvo/vec2.hpp"

namespace autorvo::dynamics {

/// Type codes double as the C_type weights of the proximity cost term.
enum class AgentType : int { Pedestrian = 1, Bicycle = 2, Tricycle = 3, Car = 4 };

inline bool is_vehicle(AgentType t) { return t != AgentType::Pedestrian; }
inline int type_code(AgentType t) { return static_cast<int>(t); }

std::string_view to_string(AgentType t);
std::optional<AgentType> agent_type_from_string(std::string_view s);

struct DynamicsParams {
  AgentType agent_type = AgentType::Car;
  double wheelbase = 2.7;        // L (m), vehicles only
  double phi_max = 0.6;          // rad, vehicles only
  double v_max_type = 14.0;      // v_max3 (m/s)
  double a_throttle = 2.5;       // m/s^2
  double a_brake = 5.0;          // m/s^2, positive
  double phi_rate_max = 0.6;     // rad/s
  double steer_gain = 1.0;       // k of the default steering map
  double g = 9.8;                // m/s^2
  double mu = 0.7;
  double t_react = 1.5;          // s

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

struct VehicleControlState {
  double v = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  Vec2 p_front;
  Vec2 p_rear;
  double u_throttle = 0.0;
  double u_steer = 0.0;

  static VehicleControlState from_front(Vec2 p_front, double theta, double v, double phi,
                                        double wheelbase);
};

struct PedestrianControlState {
  double v = 0.0;
  double theta = 0.0;
  Vec2 p;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double span() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct ReachableRanges {
  Interval speed;
  /// Steering angle for vehicles, absolute orientation for pedestrians.
  Interval heading_control;
  bool full_turn = false;
};

/// Holds (v_cmd, phi_cmd) over dt and integrates the rear-axle kinematics with
/// fixed-step RK4. Throws InvalidControl for |phi_cmd| > phi_max.
VehicleControlState integrate_vehicle(const VehicleControlState& s, const DynamicsParams& params,
                                      double v_cmd, double phi_cmd, double dt, int substeps);

PedestrianControlState integrate_pedestrian(const PedestrianControlState& s, double v_cmd,
                                            double theta_cmd, double dt);

/// Maps (current direction, preferred direction) to a preferred steering angle.
using SteeringMap = std::function<double(Vec2 a, Vec2 d_o, const DynamicsParams&)>;

/// clamp(k * signed_angle(a -> d_o), -phi_max, phi_max).
double default_steering_map(Vec2 a, Vec2 d_o, const DynamicsParams& params);

/// Per-type registry; types without an entry use the default map.
void set_steering_map(AgentType type, SteeringMap map);
void reset_steering_maps();
double steering_map(Vec2 a, Vec2 d_o, const DynamicsParams& params);

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Turning radius at the rear axle, L / |tan phi| (infinite for phi == 0).
double turning_radius(double phi, const DynamicsParams& params);

/// sqrt(g mu r); +inf at phi == 0.
double v_max_centripetal(double phi, const DynamicsParams& params);

/// Positive root of v^2 / (2 g mu) + t v - l = 0.
double v_max_braking(double clearance, const DynamicsParams& params);

/// min of the centripetal, braking and type caps (pedestrians skip the
/// centripetal bound).
double v_max_combined(double phi, double clearance, const DynamicsParams& params);

/// Control box reachable within tau from the current (v, phi) under full
/// throttle / braking / steering rate.
ReachableRanges reachable_ranges(double v, double phi, const DynamicsParams& params, double tau);
ReachableRanges reachable_ranges(const VehicleControlState& s, const DynamicsParams& params,
                                 double tau);
ReachableRanges reachable_ranges(const PedestrianControlState& s, const DynamicsParams& params,
                                 double tau);

/// Compiled-in per-type defaults; data/agent_types.json mirrors them.
DynamicsParams default_params(AgentType type);

/// Default body-frame disk chain for a type (x forward).
std::vector<geometry::Disk> default_shape(AgentType type);

}  // namespace autorvo::dynamics
