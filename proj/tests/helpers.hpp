#pragma once

#include <string>

#include "autorvo/scenario_io.hpp"
#include "autorvo/world.hpp"

namespace helpers {

using autorvo::Vec2;
using autorvo::dynamics::AgentType;

inline autorvo::sim::AgentState agent(const std::string& id, AgentType type, Vec2 position,
                                      double theta, Vec2 goal, double v = 0.0, double phi = 0.0) {
  const auto dyn = autorvo::dynamics::default_params(type);
  auto disks = autorvo::dynamics::default_shape(type);
  const Vec2 ref = autorvo::sim::default_reference_offset(type, disks, dyn.wheelbase);
  return autorvo::sim::make_agent(id, type, autorvo::geometry::CtmatShape(std::move(disks), ref), dyn,
                                  position, theta, goal, v, phi);
}

inline autorvo::sim::AgentState car(const std::string& id, Vec2 position, double theta, Vec2 goal,
                                    double v = 0.0, double phi = 0.0) {
  return agent(id, AgentType::Car, position, theta, goal, v, phi);
}

inline autorvo::sim::AgentState pedestrian(const std::string& id, Vec2 position, double theta,
                                           Vec2 goal, double v = 0.0) {
  return agent(id, AgentType::Pedestrian, position, theta, goal, v);
}

inline std::string source_path(const std::string& rel) { return std::string(AUTORVO_SOURCE_DIR) + "/" + rel; }

}  // namespace helpers
