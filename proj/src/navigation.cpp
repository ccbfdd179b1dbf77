#include "autorvo/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "autorvo/errors.hpp"

namespace autorvo::nav {

using geometry::CtmatShape;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWaitSpeed = 0.05;

std::vector<double> even_grid(double lo, double hi, int count) {
  if (hi - lo <= 1e-12 || count <= 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

double control_difference(const AgentState& agent, double a, double b) {
  return agent.is_vehicle() ? a - b : wrap_angle(a - b);
}

int checkpoint_substeps(const NavConfig& cfg) {
  return std::max(1, cfg.integration_substeps / std::max(1, cfg.substeps_collision));
}

std::vector<CtmatShape> placed_shapes(std::span<const AgentState> agents) {
  std::vector<CtmatShape> out;
  out.reserve(agents.size());
  for (const AgentState& a : agents) out.push_back(a.placed());
  return out;
}

}  // namespace

void CostWeights::validate() const {
  for (double w : {a, b, c, d, e}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("nav.weights must be >= 0");
  }
  if (a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0 && e == 0.0) {
    throw ValidationError("nav.weights must not all be zero");
  }
}

void NavConfig::validate() const {
  if (!(sigma >= 1.0)) throw ValidationError("nav.sigma must be >= 1");
  if (!(detection_radius > 0.0)) throw ValidationError("nav.detection_radius must be > 0");
  if (!(tau > 0.0)) throw ValidationError("nav.tau must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("nav.kappa must be > 0");
  if (substeps_collision < 1) throw ValidationError("nav.substeps_collision must be >= 1");
  if (integration_substeps < 1) throw ValidationError("nav.integration_substeps must be >= 1");
  if (samples_v < 2) throw ValidationError("nav.samples_v must be >= 2");
  if (samples_phi < 2) throw ValidationError("nav.samples_phi must be >= 2");
  if (!(speedup_factor >= 1.0)) throw ValidationError("nav.speedup_factor must be >= 1");
  if (!(safety_margin >= 0.0)) throw ValidationError("nav.safety_margin must be >= 0");
  if (!(min_heading_window > 0.0)) throw ValidationError("nav.min_heading_window must be > 0");
  weights.validate();
}

double forward_clearance(const AgentState& agent, std::span<const CtmatShape> neighbors,
                         double cap) {
  // Agent frame: origin at the reference point, x along the heading.
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  double x_front = -y_lo;
  for (const auto& d : agent.shape.disks()) {
    const Vec2 c = d.center - agent.shape.reference_offset();
    y_lo = std::min(y_lo, c.y - d.radius);
    y_hi = std::max(y_hi, c.y + d.radius);
    x_front = std::max(x_front, c.x + d.radius);
  }
  const Vec2 origin = agent.reference_point();
  const double heading = agent.heading();
  double best = cap;
  constexpr int kSlices = 8;
  for (const CtmatShape& shape : neighbors) {
    for (const auto& piece : shape.pieces()) {
      for (int k = 0; k <= kSlices; ++k) {
        // conv of two disks is the union of their linear interpolations
        const double t = static_cast<double>(k) / kSlices;
        const Vec2 cw = piece.disks[0].center * (1 - t) + piece.disks[1].center * t;
        const double r = piece.disks[0].radius * (1 - t) + piece.disks[1].radius * t;
        const Vec2 c = rotate(cw - origin, -heading);
        if (c.y + r < y_lo || c.y - r > y_hi) continue;
        if (c.x + r < x_front) continue;
        double x_first = c.x - r;
        if (c.y < y_lo || c.y > y_hi) {
          const double dy = c.y < y_lo ? y_lo - c.y : c.y - y_hi;
          x_first = c.x - std::sqrt(std::max(0.0, r * r - dy * dy));
        }
        best = std::min(best, std::max(0.0, x_first - x_front));
      }
    }
  }
  return best;
}

PreferredCommand prediction_adjust(const AgentState& agent, std::span<const AgentState> neighbors,
                                   std::span<const CtmatShape> obstacles, Vec2 h, double phi_o,
                                   const NavConfig& cfg) {
  std::vector<CtmatShape> now = placed_shapes(neighbors);
  now.insert(now.end(), obstacles.begin(), obstacles.end());

  std::vector<CtmatShape> later;
  later.reserve(now.size());
  for (const AgentState& n : neighbors) {
    later.push_back(sim::predict_constant_control(n, cfg.kappa, cfg.integration_substeps).placed());
  }
  later.insert(later.end(), obstacles.begin(), obstacles.end());

  const double width = agent.shape.width();
  const bool free_now = in_free_space(compute_fan_spaces(agent, now, cfg), h, width, cfg.sigma);
  const bool free_later = in_free_space(compute_fan_spaces(agent, later, cfg), h, width, cfg.sigma);

  PreferredCommand cmd;
  if (cfg.dynamics) {
    cmd.clearance = forward_clearance(agent, now, cfg.detection_radius);
    cmd.v_max = dynamics::v_max_combined(phi_o, cmd.clearance, agent.dyn);
  } else {
    cmd.clearance = cfg.detection_radius;
    cmd.v_max = agent.dyn.v_max_type;
  }
  if (!free_now && free_later) {
    cmd.mode = PredictionMode::Stop;
    cmd.v_o = 0.0;
  } else if (free_now && !free_later) {
    cmd.mode = PredictionMode::SpeedUp;
    cmd.v_o = std::min(cfg.speedup_factor * cmd.v_max / 2.0, cmd.v_max);
  } else {
    cmd.v_o = cmd.v_max / 2.0;
  }
  return cmd;
}

std::vector<ControlSample> sample_controls(const AgentState& agent, const NavConfig& cfg,
                                           double heading_o) {
  const auto& dyn = agent.dyn;
  dynamics::Interval speed;
  dynamics::Interval steer;
  if (cfg.dynamics) {
    const auto ranges = dynamics::reachable_ranges(agent.speed(), agent.heading_control(), dyn, cfg.tau);
    speed = ranges.speed;
    steer = ranges.heading_control;
  } else {
    speed = {0.0, dyn.v_max_type};
    steer = {-dyn.phi_max, dyn.phi_max};
  }

  std::vector<double> vs = even_grid(speed.lo, speed.hi, cfg.samples_v);
  std::vector<double> hs;
  if (agent.is_vehicle()) {
    hs = even_grid(steer.lo, steer.hi, cfg.samples_phi);
  } else {
    // Orientation offsets spread evenly over (-pi, pi] around the preferred heading.
    const int n = std::max(1, cfg.samples_phi);
    for (int j = 0; j < n; ++j) hs.push_back(heading_o - kPi + 2.0 * kPi * (j + 1) / n);
    std::sort(hs.begin(), hs.end(), [](double a, double b) { return wrap_angle(a) < wrap_angle(b); });
    for (double& v : hs) v = wrap_angle(v);
  }
  if (vs.size() == 1 && hs.size() == 1) throw EmptyRange("reachable control box is degenerate");

  std::vector<ControlSample> out;
  out.reserve(vs.size() * hs.size());
  int index = 0;
  for (double v : vs) {
    for (double hc : hs) {
      const int grid_index = index++;
      if (cfg.dynamics && agent.is_vehicle() && v > dynamics::v_max_centripetal(hc, dyn) + 1e-12) {
        continue;
      }
      ControlSample s;
      s.v = v;
      s.heading_control = hc;
      s.grid_index = grid_index;
      out.push_back(s);
    }
  }
  return out;
}

AgentState advance_agent(const AgentState& agent, double v, double heading_control,
                         const NavConfig& cfg) {
  AgentState out = agent;
  if (const auto* vc = std::get_if<dynamics::VehicleControlState>(&agent.control)) {
    out.control = dynamics::integrate_vehicle(*vc, agent.dyn, v, heading_control, cfg.tau,
                                              cfg.integration_substeps);
  } else {
    const auto& pc = std::get<dynamics::PedestrianControlState>(agent.control);
    out.control = dynamics::integrate_pedestrian(pc, v, heading_control, cfg.tau);
  }
  return out;
}

std::vector<CtmatShape> agent_checkpoints(const AgentState& agent, double v,
                                          double heading_control, const NavConfig& cfg) {
  const int n = std::max(1, cfg.substeps_collision);
  const double dt = cfg.tau / n;
  std::vector<CtmatShape> out;
  out.reserve(static_cast<std::size_t>(n));
  if (const auto* vc = std::get_if<dynamics::VehicleControlState>(&agent.control)) {
    const int sub = checkpoint_substeps(cfg);
    dynamics::VehicleControlState s = *vc;
    for (int k = 1; k <= n; ++k) {
      s = dynamics::integrate_vehicle(s, agent.dyn, v, heading_control, dt, sub);
      out.push_back(geometry::place_shape(agent.shape, {s.p_front, s.theta}));
    }
  } else {
    const auto& pc = std::get<dynamics::PedestrianControlState>(agent.control);
    const Vec2 dir = unit_from_angle(heading_control);
    for (int k = 1; k <= n; ++k) {
      out.push_back(geometry::place_shape(agent.shape, {pc.p + dir * (v * dt * k), heading_control}));
    }
  }
  return out;
}

std::vector<NeighborTrack> build_tracks(const AgentState& agent, const WorldView& world,
                                        std::span<const sim::Neighbor> neighbors,
                                        const NavConfig& cfg) {
  const int n = std::max(1, cfg.substeps_collision);
  const double dt = cfg.tau / n;
  std::vector<NeighborTrack> tracks;
  tracks.reserve(neighbors.size());
  for (const sim::Neighbor& nb : neighbors) {
    if (nb.kind == sim::Neighbor::Kind::Obstacle) {
      const auto& o = world.obstacles[nb.index];
      tracks.push_back({o.id, dynamics::type_code(agent.type), true, o.placed,
                        std::vector<geometry::CtmatShape>(static_cast<std::size_t>(n), o.placed),
                        o.placed.reference_offset(), o.placed.bound_radius()});
      continue;
    }
    const AgentState& other = world.agents[nb.index];
    NeighborTrack t{other.id, dynamics::type_code(other.type), false, other.placed(), {}, {}, 0.0};
    AgentState moving = other;
    const int sub = checkpoint_substeps(cfg);
    for (int k = 1; k <= n; ++k) {
      moving = sim::predict_constant_control(moving, dt, sub);
      t.checkpoints.push_back(moving.placed());
    }
    t.ref_end = moving.reference_point();
    t.sweep_radius = t.now.bound_radius() + other.speed() * cfg.tau;
    tracks.push_back(std::move(t));
  }
  return tracks;
}

void filter_collision_free(const AgentState& agent, std::vector<ControlSample>& samples,
                           std::span<const NeighborTrack> tracks, const NavConfig& cfg) {
  const CtmatShape start = agent.placed();
  const double margin = cfg.safety_margin;
  for (ControlSample& s : samples) {
    // Neighbors out of reach for this speed skip the per-checkpoint tests.
    const double reach = start.bound_radius() + s.v * cfg.tau;
    std::vector<const NeighborTrack*> near;
    for (const NeighborTrack& t : tracks) {
      const double gap = distance(start.bound_center(), t.now.bound_center()) - reach - t.sweep_radius;
      if (gap <= margin + geometry::kEpsilon) near.push_back(&t);
    }
    s.collision_free = true;
    if (near.empty()) continue;
    const auto path = agent_checkpoints(agent, s.v, s.heading_control, cfg);
    for (std::size_t k = 0; k < path.size() && s.collision_free; ++k) {
      for (const NeighborTrack* t : near) {
        if (geometry::shapes_within(path[k], t->checkpoints[k], margin) ||
            (cfg.guard_stopped_neighbors && geometry::shapes_within(path[k], t->now, margin))) {
          s.collision_free = false;
          break;
        }
      }
    }
  }
}

void evaluate_cost(const AgentState& agent, ControlSample& sample,
                   std::span<const NeighborTrack> tracks, const NavConfig& cfg,
                   const Preferred& preferred) {
  const AgentState end = advance_agent(agent, sample.v, sample.heading_control, cfg);
  const Vec2 p = end.reference_point();
  const CtmatShape end_shape = end.placed();
  CostTerms t;
  const double dv = sample.v - preferred.v_o;
  const double dh = control_difference(agent, sample.heading_control, preferred.heading_o);
  t.f1 = dv * dv + dh * dh;
  t.f2 = std::abs(sample.v - agent.prev.v) +
         std::abs(control_difference(agent, sample.heading_control, agent.prev.heading_control));
  const int own = dynamics::type_code(agent.type);
  for (const NeighborTrack& n : tracks) {
    double w = 1.0 + own - n.type_code;
    if (cfg.f3_clamp_nonnegative) w = std::max(0.0, w);
    t.f3 -= w * distance(p, n.ref_end);
    t.f4 -= geometry::shape_signed_distance(end_shape, n.checkpoints.back());
  }
  t.f5 = distance(p, agent.goal);
  sample.terms = t;
  const CostWeights& w = cfg.weights;
  sample.total_cost = w.a * t.f1 + w.b * t.f2 + w.c * t.f3 + w.d * t.f4 + w.e * t.f5;
}

const ControlSample& select_control(std::span<const ControlSample> candidates) {
  const ControlSample* best = nullptr;
  for (const ControlSample& c : candidates) {
    if (!c.collision_free) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    auto key = [](const ControlSample& s) {
      return std::make_tuple(s.total_cost, s.terms.f1, std::abs(s.heading_control), s.v, s.grid_index);
    };
    if (key(c) < key(*best)) best = &c;
  }
  if (best == nullptr) throw NoCandidate("no collision-free candidate");
  return *best;
}

Behavior behavior_for(const AgentState& agent, double v, double heading_control) {
  if (v < kWaitSpeed) return Behavior::Wait;
  double turn = 0.0;
  double threshold = 0.0;
  if (agent.is_vehicle()) {
    turn = heading_control;
    threshold = 0.1 * agent.dyn.phi_max;
  } else {
    turn = wrap_angle(heading_control - agent.heading());
    threshold = 0.1;
  }
  if (turn > threshold) return Behavior::TurnLeft;
  if (turn < -threshold) return Behavior::TurnRight;
  return Behavior::GoAhead;
}

PlanResult plan_step(std::size_t agent_index, const WorldView& world, const NavConfig& cfg) {
  const AgentState& agent = world.agents[agent_index];
  const auto neighbors = sim::neighbors_of(world, agent_index, cfg.detection_radius);

  std::vector<AgentState> neighbor_agents;
  std::vector<CtmatShape> obstacle_shapes;
  std::vector<CtmatShape> occluders;
  for (const sim::Neighbor& n : neighbors) {
    if (n.kind == sim::Neighbor::Kind::Agent) {
      neighbor_agents.push_back(world.agents[n.index]);
      occluders.push_back(neighbor_agents.back().placed());
    } else {
      obstacle_shapes.push_back(world.obstacles[n.index].placed);
      occluders.push_back(obstacle_shapes.back());
    }
  }

  PlanResult result;
  result.neighbor_count = neighbors.size();

  // Preferred direction and steering.
  const Vec2 ref = agent.reference_point();
  const Vec2 to_goal = agent.goal - ref;
  const Vec2 h = norm(to_goal) > 0.0 ? normalized(to_goal) : unit_from_angle(agent.heading());
  const auto fans = compute_fan_spaces(agent, occluders, cfg);
  const Vec2 d_o = preferred_direction(fans, h, agent.shape.width(), cfg.sigma);
  result.preferred_direction = d_o;
  const double heading_o = agent.is_vehicle()
                               ? dynamics::steering_map(unit_from_angle(agent.heading()), d_o, agent.dyn)
                               : bearing(d_o);
  result.heading_o = heading_o;

  // Preferred speed with lookahead.
  result.preferred = prediction_adjust(agent, neighbor_agents, obstacle_shapes, h, heading_o, cfg);
  const Preferred preferred{result.preferred.v_o, heading_o};

  std::vector<ControlSample> samples;
  try {
    samples = sample_controls(agent, cfg, heading_o);
  } catch (const EmptyRange&) {
    ControlSample s;
    s.v = agent.speed();
    s.heading_control = agent.heading_control();
    samples.push_back(s);
  }

  const auto tracks = build_tracks(agent, world, neighbors, cfg);
  filter_collision_free(agent, samples, tracks, cfg);
  for (ControlSample& s : samples) {
    if (s.collision_free) {
      evaluate_cost(agent, s, tracks, cfg, preferred);
      ++result.candidate_count;
    }
  }

  try {
    result.selected = select_control(samples);
    result.behavior = behavior_for(agent, result.selected.v, result.selected.heading_control);
  } catch (const NoCandidate&) {
    result.emergency = true;
    result.selected = ControlSample{};
    result.selected.v = 0.0;
    result.selected.heading_control = agent.heading_control();
    result.selected.collision_free = false;
    result.behavior = Behavior::Wait;
  }
  return result;
}

}  // namespace autorvo::nav
