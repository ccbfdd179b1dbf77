#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "autorvo/dynamics.hpp"
#include "autorvo/geometry.hpp"

namespace autorvo::sim {

using dynamics::AgentType;

enum class Behavior { GoAhead, TurnLeft, TurnRight, Wait };

std::string_view to_string(Behavior b);

/// Previously selected control: (v', phi') for vehicles, (v', theta') for pedestrians.
struct PrevControl {
  double v = 0.0;
  double heading_control = 0.0;
};

using ControlState = std::variant<dynamics::VehicleControlState, dynamics::PedestrianControlState>;

struct AgentState {
  std::string id;
  AgentType type = AgentType::Car;
  geometry::CtmatShape shape{{{{0.0, 0.0}, 0.5}}};
  ControlState control;
  Vec2 goal;
  PrevControl prev;
  Behavior behavior = Behavior::GoAhead;
  dynamics::DynamicsParams dyn;
  bool arrived = false;

  bool is_vehicle() const { return dynamics::is_vehicle(type); }
  /// p_f for vehicles, the shape midpoint for pedestrians.
  Vec2 reference_point() const;
  double heading() const;
  double speed() const;
  /// Steering angle (vehicles) or 0 (pedestrians).
  double steering() const;
  /// phi for vehicles, theta for pedestrians.
  double heading_control() const;
  geometry::Pose pose() const;
  geometry::CtmatShape placed() const;
};

/// Builds a consistent agent from its reference-point pose.
AgentState make_agent(std::string id, AgentType type, geometry::CtmatShape shape,
                      const dynamics::DynamicsParams& dyn, Vec2 position, double theta, Vec2 goal,
                      double v = 0.0, double phi = 0.0);

/// The agent advanced by `t` seconds at its current speed and steering.
AgentState predict_constant_control(const AgentState& agent, double t, int substeps);

struct Obstacle {
  std::string id;
  geometry::CtmatShape placed;
};

struct World {
  std::vector<AgentState> agents;
  std::vector<Obstacle> obstacles;
  int step = 0;
  double time = 0.0;
};

/// Read-only view handed to planners.
struct WorldView {
  std::span<const AgentState> agents;
  std::span<const Obstacle> obstacles;
};

inline WorldView view_of(const World& w) { return {w.agents, w.obstacles}; }

struct Neighbor {
  enum class Kind { Agent, Obstacle };
  Kind kind = Kind::Agent;
  std::size_t index = 0;
  double distance = 0.0;
};

/// Non-arrived agents and obstacles whose placed shape comes within `radius` of
/// the agent's reference point (closed ball); nearest first, ties by id.
std::vector<Neighbor> neighbors_of(const WorldView& world, std::size_t agent_index, double radius);

}  // namespace autorvo::sim
