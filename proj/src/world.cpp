#include "autorvo/world.hpp"

#include <algorithm>

namespace autorvo::sim {

std::string_view to_string(Behavior b) {
  switch (b) {
    case Behavior::GoAhead:
      return "GoAhead";
    case Behavior::TurnLeft:
      return "TurnLeft";
    case Behavior::TurnRight:
      return "TurnRight";
    case Behavior::Wait:
      return "Wait";
  }
  return "GoAhead";
}

Vec2 AgentState::reference_point() const {
  if (const auto* v = std::get_if<dynamics::VehicleControlState>(&control)) return v->p_front;
  return std::get<dynamics::PedestrianControlState>(control).p;
}

double AgentState::heading() const {
  return std::visit([](const auto& c) { return c.theta; }, control);
}

double AgentState::speed() const {
  return std::visit([](const auto& c) { return c.v; }, control);
}

double AgentState::steering() const {
  if (const auto* v = std::get_if<dynamics::VehicleControlState>(&control)) return v->phi;
  return 0.0;
}

double AgentState::heading_control() const { return is_vehicle() ? steering() : heading(); }

geometry::Pose AgentState::pose() const { return {reference_point(), heading()}; }

geometry::CtmatShape AgentState::placed() const { return geometry::place_shape(shape, pose()); }

AgentState make_agent(std::string id, AgentType type, geometry::CtmatShape shape,
                      const dynamics::DynamicsParams& dyn, Vec2 position, double theta, Vec2 goal,
                      double v, double phi) {
  AgentState a;
  a.id = std::move(id);
  a.type = type;
  a.shape = std::move(shape);
  a.dyn = dyn;
  a.goal = goal;
  if (dynamics::is_vehicle(type)) {
    a.control = dynamics::VehicleControlState::from_front(position, theta, v, phi, dyn.wheelbase);
    a.prev = {v, phi};
  } else {
    a.control = dynamics::PedestrianControlState{v, theta, position};
    a.prev = {v, theta};
  }
  return a;
}

AgentState predict_constant_control(const AgentState& agent, double t, int substeps) {
  AgentState out = agent;
  if (t <= 0.0) return out;
  if (const auto* v = std::get_if<dynamics::VehicleControlState>(&agent.control)) {
    out.control = dynamics::integrate_vehicle(*v, agent.dyn, v->v, v->phi, t, substeps);
  } else {
    const auto& p = std::get<dynamics::PedestrianControlState>(agent.control);
    out.control = dynamics::integrate_pedestrian(p, p.v, p.theta, t);
  }
  return out;
}

std::vector<Neighbor> neighbors_of(const WorldView& world, std::size_t agent_index,
                                   double radius) {
  const AgentState& self = world.agents[agent_index];
  const Vec2 p = self.reference_point();
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    const AgentState& other = world.agents[i];
    if (i == agent_index || other.arrived) continue;
    const auto placed = other.placed();
    // cheap reject before the exact piece distance
    if (distance(placed.bound_center(), p) - placed.bound_radius() > radius) continue;
    const double d = std::max(0.0, geometry::point_signed_distance(p, placed));
    if (d <= radius) out.push_back({Neighbor::Kind::Agent, i, d});
  }
  for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
    const auto& placed = world.obstacles[i].placed;
    if (distance(placed.bound_center(), p) - placed.bound_radius() > radius) continue;
    const double d = std::max(0.0, geometry::point_signed_distance(p, placed));
    if (d <= radius) out.push_back({Neighbor::Kind::Obstacle, i, d});
  }
  auto id_of = [&](const Neighbor& n) -> const std::string& {
    return n.kind == Neighbor::Kind::Agent ? world.agents[n.index].id
                                           : world.obstacles[n.index].id;
  };
  std::sort(out.begin(), out.end(), [&](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return id_of(a) < id_of(b);
  });
  return out;
}

}  // namespace autorvo::sim
