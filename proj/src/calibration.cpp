// Per-type dynamics defaults. The values are a hand calibration for urban
// traffic at walking-to-city speeds; data/agent_types.json carries the same
// numbers and a unit test keeps the two in sync.

#include "autorvo/dynamics.hpp"

namespace autorvo::dynamics {

DynamicsParams default_params(AgentType type) {
  DynamicsParams p;
  p.agent_type = type;
  switch (type) {
    case AgentType::Pedestrian:
      p.wheelbase = 0.0;
      p.phi_max = 0.0;
      p.phi_rate_max = 0.0;
      p.steer_gain = 0.0;
      p.v_max_type = 1.6;
      p.a_throttle = 1.0;
      p.a_brake = 2.0;
      break;
    case AgentType::Bicycle:
      p.wheelbase = 1.1;
      p.phi_max = 0.5;
      p.phi_rate_max = 0.8;
      p.steer_gain = 1.2;
      p.v_max_type = 6.0;
      p.a_throttle = 1.5;
      p.a_brake = 3.0;
      break;
    case AgentType::Tricycle:
      p.wheelbase = 1.5;
      p.phi_max = 0.55;
      p.phi_rate_max = 0.7;
      p.steer_gain = 1.0;
      p.v_max_type = 7.0;
      p.a_throttle = 1.5;
      p.a_brake = 3.0;
      break;
    case AgentType::Car:
      p.wheelbase = 2.7;
      p.phi_max = 0.6;
      p.phi_rate_max = 0.6;
      p.steer_gain = 1.0;
      p.v_max_type = 14.0;
      p.a_throttle = 2.5;
      p.a_brake = 5.0;
      break;
  }
  return p;
}

std::vector<geometry::Disk> default_shape(AgentType type) {
  switch (type) {
    case AgentType::Pedestrian:
      // shoulders
      return {{{0.0, -0.12}, 0.2}, {{0.0, 0.12}, 0.2}};
    case AgentType::Bicycle:
      return {{{-0.55, 0.0}, 0.3}, {{0.55, 0.0}, 0.3}};
    case AgentType::Tricycle:
      return {{{-0.65, 0.0}, 0.6}, {{0.65, 0.0}, 0.55}};
    case AgentType::Car:
      return {{{-1.35, 0.0}, 0.9}, {{0.0, 0.0}, 0.9}, {{1.35, 0.0}, 0.9}};
  }
  return {};
}

}  // namespace autorvo::dynamics
