#include "autorvo/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "autorvo/parallel.hpp"

namespace autorvo::sim {

namespace {

TrajectoryRecord record_of(const AgentState& a, int step, double time) {
  TrajectoryRecord r;
  r.step = step;
  r.time = time;
  r.position = a.reference_point();
  r.theta = a.heading();
  r.v = a.speed();
  if (a.is_vehicle()) r.phi = a.steering();
  r.behavior = a.behavior;
  return r;
}

bool at_goal(const AgentState& a, double goal_radius) {
  return distance(a.reference_point(), a.goal) <= goal_radius;
}

AuditEvent make_event(int step, const std::string& x, const std::string& y) {
  return x < y ? AuditEvent{step, x, y} : AuditEvent{step, y, x};
}

}  // namespace

World world_from_scenario(const Scenario& scenario) {
  World w;
  w.agents = scenario.agents;
  w.obstacles = scenario.obstacles;
  for (AgentState& a : w.agents) {
    if (at_goal(a, scenario.goal_radius)) a.arrived = true;
  }
  return w;
}

int step_count(double duration, double tau) {
  return static_cast<int>(std::floor(duration / tau + 1e-9));
}

std::vector<AuditEvent> audit_overlaps(const World& world) {
  std::vector<geometry::CtmatShape> placed;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    if (world.agents[i].arrived) continue;
    active.push_back(i);
    placed.push_back(world.agents[i].placed());
  }
  std::vector<AuditEvent> out;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::string& id_i = world.agents[active[i]].id;
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      if (geometry::shapes_overlap(placed[i], placed[j])) {
        out.push_back(make_event(world.step, id_i, world.agents[active[j]].id));
      }
    }
    for (const Obstacle& o : world.obstacles) {
      if (geometry::shapes_overlap(placed[i], o.placed)) out.push_back(make_event(world.step, id_i, o.id));
    }
  }
  std::sort(out.begin(), out.end(), [](const AuditEvent& x, const AuditEvent& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return out;
}

StepReport step(World& world, const nav::NavConfig& cfg, const StepOptions& options) {
  StepReport report;
  const std::size_t n = world.agents.size();
  report.plans.resize(n);
  const int step_index = world.step + 1;

  // PLAN against the frozen snapshot.
  {
    const World& snapshot = world;
    const WorldView view = view_of(snapshot);
    parallel_for(n, options.workers, [&](std::size_t i) {
      const AgentState& a = snapshot.agents[i];
      if (a.arrived) return;
      if (options.hooks && options.hooks->on_plan) options.hooks->on_plan(step_index, a.id);
      report.plans[i] = nav::plan_step(i, view, cfg);
    });
  }

  // COMMIT.
  std::vector<AgentState> next = world.agents;
  for (std::size_t i = 0; i < n; ++i) {
    AgentState& a = next[i];
    if (a.arrived) continue;
    if (options.hooks && options.hooks->on_commit) options.hooks->on_commit(step_index, a.id);
    const nav::PlanResult& plan = report.plans[i];
    a = nav::advance_agent(a, plan.selected.v, plan.selected.heading_control, cfg);
    a.prev = {plan.selected.v, plan.selected.heading_control};
    a.behavior = plan.behavior;
    if (plan.emergency) ++report.emergencies;
    if (at_goal(a, options.goal_radius)) {
      a.arrived = true;
      ++report.arrivals;
    }
  }
  world.agents = std::move(next);
  world.step = step_index;
  world.time = step_index * cfg.tau;
  report.overlaps = audit_overlaps(world);
  return report;
}

TrajectoryLog run(const Scenario& scenario, const RunOptions& options) {
  TrajectoryLog log;
  log.tau = scenario.nav.tau;
  log.config_echo = scenario.config_echo;
  World world = world_from_scenario(scenario);

  std::vector<std::size_t> track_of(world.agents.size());
  for (std::size_t i = 0; i < world.agents.size(); ++i) {
    const AgentState& a = world.agents[i];
    track_of[i] = log.agents.size();
    log.agents.push_back({a.id, a.type, {record_of(a, 0, 0.0)}});
  }
  auto initial = audit_overlaps(world);
  log.audit_per_step.push_back(static_cast<int>(initial.size()));
  log.audit.insert(log.audit.end(), initial.begin(), initial.end());

  const int total = step_count(scenario.duration, scenario.nav.tau);
  StepOptions step_options{scenario.goal_radius, options.workers, options.hooks};
  for (int k = 0; k < total; ++k) {
    const bool all_arrived = std::all_of(world.agents.begin(), world.agents.end(),
                                         [](const AgentState& a) { return a.arrived; });
    if (all_arrived) break;
    std::vector<bool> was_arrived;
    for (const AgentState& a : world.agents) was_arrived.push_back(a.arrived);
    StepReport report = step(world, scenario.nav, step_options);
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      if (was_arrived[i]) continue;
      log.agents[track_of[i]].records.push_back(record_of(world.agents[i], world.step, world.time));
    }
    log.arrivals += report.arrivals;
    log.emergencies += report.emergencies;
    log.audit_per_step.push_back(static_cast<int>(report.overlaps.size()));
    log.audit.insert(log.audit.end(), report.overlaps.begin(), report.overlaps.end());
    log.steps = world.step;
  }
  return log;
}

}  // namespace autorvo::sim
