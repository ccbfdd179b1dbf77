#include "autorvo/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "autorvo/errors.hpp"

namespace autorvo::dynamics {

namespace {

std::mutex g_maps_mutex;
std::map<AgentType, SteeringMap>& steering_maps() {
  static std::map<AgentType, SteeringMap> maps;
  return maps;
}

struct Pose3 {
  double x, y, theta;
};

Pose3 derivative(const Pose3& s, double v, double yaw_rate) {
  return {v * std::cos(s.theta), v * std::sin(s.theta), yaw_rate};
}

Pose3 axpy(const Pose3& s, const Pose3& k, double h) {
  return {s.x + h * k.x, s.y + h * k.y, s.theta + h * k.theta};
}

}  // namespace

std::string_view to_string(AgentType t) {
  switch (t) {
    case AgentType::Pedestrian:
      return "pedestrian";
    case AgentType::Bicycle:
      return "bicycle";
    case AgentType::Tricycle:
      return "tricycle";
    case AgentType::Car:
      return "car";
  }
  return "unknown";
}

std::optional<AgentType> agent_type_from_string(std::string_view s) {
  if (s == "pedestrian") return AgentType::Pedestrian;
  if (s == "bicycle") return AgentType::Bicycle;
  if (s == "tricycle") return AgentType::Tricycle;
  if (s == "car") return AgentType::Car;
  return std::nullopt;
}

void DynamicsParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be positive");
    }
  };
  positive(v_max_type, "v_max_type");
  positive(a_throttle, "a_throttle");
  positive(a_brake, "a_brake");
  positive(g, "g");
  positive(mu, "mu");
  positive(t_react, "t_react");
  if (is_vehicle(agent_type)) {
    positive(wheelbase, "L");
    positive(phi_max, "phi_max");
    positive(phi_rate_max, "phi_rate_max");
    positive(steer_gain, "steer_gain");
    if (phi_max >= std::numbers::pi / 2) throw ValidationError("phi_max must be < pi/2");
  }
}

VehicleControlState VehicleControlState::from_front(Vec2 p_front, double theta, double v,
                                                    double phi, double wheelbase) {
  VehicleControlState s;
  s.v = v;
  s.phi = phi;
  s.theta = theta;
  s.p_front = p_front;
  s.p_rear = p_front - unit_from_angle(theta) * wheelbase;
  return s;
}

VehicleControlState integrate_vehicle(const VehicleControlState& s, const DynamicsParams& params,
                                      double v_cmd, double phi_cmd, double dt, int substeps) {
  if (std::abs(phi_cmd) > params.phi_max + geometry::kEpsilon) {
    throw InvalidControl("steering command exceeds phi_max");
  }
  if (substeps < 1) substeps = 1;
  const double yaw_rate = std::tan(phi_cmd) / params.wheelbase * v_cmd;
  const double h = dt / substeps;
  Pose3 p{s.p_rear.x, s.p_rear.y, s.theta};
  for (int i = 0; i < substeps; ++i) {
    const Pose3 k1 = derivative(p, v_cmd, yaw_rate);
    const Pose3 k2 = derivative(axpy(p, k1, h / 2), v_cmd, yaw_rate);
    const Pose3 k3 = derivative(axpy(p, k2, h / 2), v_cmd, yaw_rate);
    const Pose3 k4 = derivative(axpy(p, k3, h), v_cmd, yaw_rate);
    p = {p.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
         p.y + h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
         p.theta + h / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
  }
  VehicleControlState out = s;
  out.theta = wrap_angle(p.theta);
  out.p_rear = {p.x, p.y};
  out.p_front = out.p_rear + unit_from_angle(out.theta) * params.wheelbase;
  const double dv = v_cmd - s.v;
  out.u_throttle = dv >= 0.0 ? std::min(1.0, dv / (params.a_throttle * dt))
                             : std::max(-1.0, dv / (params.a_brake * dt));
  out.u_steer = std::clamp(phi_cmd / params.phi_max, -1.0, 1.0);
  out.v = v_cmd;
  out.phi = phi_cmd;
  return out;
}

PedestrianControlState integrate_pedestrian(const PedestrianControlState& s, double v_cmd,
                                            double theta_cmd, double dt) {
  PedestrianControlState out;
  out.v = v_cmd;
  out.theta = wrap_angle(theta_cmd);
  out.p = s.p + unit_from_angle(theta_cmd) * (v_cmd * dt);
  return out;
}

double default_steering_map(Vec2 a, Vec2 d_o, const DynamicsParams& params) {
  return std::clamp(params.steer_gain * signed_angle(a, d_o), -params.phi_max, params.phi_max);
}

void set_steering_map(AgentType type, SteeringMap map) {
  std::lock_guard lock(g_maps_mutex);
  steering_maps()[type] = std::move(map);
}

void reset_steering_maps() {
  std::lock_guard lock(g_maps_mutex);
  steering_maps().clear();
}

double steering_map(Vec2 a, Vec2 d_o, const DynamicsParams& params) {
  {
    std::lock_guard lock(g_maps_mutex);
    auto& maps = steering_maps();
    if (auto it = maps.find(params.agent_type); it != maps.end()) {
      const double phi = it->second(a, d_o, params);
      return std::clamp(phi, -params.phi_max, params.phi_max);
    }
  }
  return default_steering_map(a, d_o, params);
}

double turning_radius(double phi, const DynamicsParams& params) {
  const double t = std::abs(std::tan(phi));
  return t == 0.0 ? kUnbounded : params.wheelbase / t;
}

double v_max_centripetal(double phi, const DynamicsParams& params) {
  const double r = turning_radius(phi, params);
  return std::isinf(r) ? kUnbounded : std::sqrt(params.g * params.mu * r);
}

double v_max_braking(double clearance, const DynamicsParams& params) {
  if (clearance <= 0.0) return 0.0;
  if (std::isinf(clearance)) return kUnbounded;
  const double gmu = params.g * params.mu;
  const double t = params.t_react;
  // Rationalized root of v^2/(2 gmu) + t v - l = 0; avoids cancellation at small l.
  return 2.0 * clearance / (t + std::sqrt(t * t + 2.0 * clearance / gmu));
}

double v_max_combined(double phi, double clearance, const DynamicsParams& params) {
  double v = std::min(v_max_braking(clearance, params), params.v_max_type);
  if (is_vehicle(params.agent_type)) v = std::min(v, v_max_centripetal(phi, params));
  return v;
}

ReachableRanges reachable_ranges(double v, double phi, const DynamicsParams& params, double tau) {
  ReachableRanges r;
  const double hi = std::min(v + params.a_throttle * tau, params.v_max_type);
  r.speed = {std::max(0.0, v - params.a_brake * tau), std::max(hi, std::min(v, params.v_max_type))};
  r.speed.lo = std::min(r.speed.lo, r.speed.hi);
  if (is_vehicle(params.agent_type)) {
    r.heading_control = {std::max(-params.phi_max, phi - params.phi_rate_max * tau),
                         std::min(params.phi_max, phi + params.phi_rate_max * tau)};
  } else {
    r.heading_control = {-std::numbers::pi, std::numbers::pi};
    r.full_turn = true;
  }
  return r;
}

ReachableRanges reachable_ranges(const VehicleControlState& s, const DynamicsParams& params,
                                 double tau) {
  return reachable_ranges(s.v, s.phi, params, tau);
}

ReachableRanges reachable_ranges(const PedestrianControlState& s, const DynamicsParams& params,
                                 double tau) {
  return reachable_ranges(s.v, s.theta, params, tau);
}

}  // namespace autorvo::dynamics
