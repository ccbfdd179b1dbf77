#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autorvo/navigation.hpp"
#include "autorvo/world.hpp"

namespace autorvo::sim {

struct Scenario {
  std::vector<AgentState> agents;
  std::vector<Obstacle> obstacles;
  nav::NavConfig nav;
  std::map<AgentType, dynamics::DynamicsParams> agent_types;
  double duration = 30.0;
  double goal_radius = 0.5;
  std::uint64_t seed = 0;
  /// Effective configuration (JSON text) echoed into logs.
  std::string config_echo;
};

World world_from_scenario(const Scenario& scenario);

struct TrajectoryRecord {
  int step = 0;
  double time = 0.0;
  Vec2 position;
  double theta = 0.0;
  double v = 0.0;
  std::optional<double> phi;  // vehicles only
  Behavior behavior = Behavior::GoAhead;
};

struct AgentTrack {
  std::string id;
  AgentType type = AgentType::Car;
  std::vector<TrajectoryRecord> records;
};

struct AuditEvent {
  int step = 0;
  std::string a;
  std::string b;
};

struct TrajectoryLog {
  double tau = 0.0;
  int steps = 0;
  std::vector<AgentTrack> agents;
  /// Overlapping pairs per step, index 0 = initial state.
  std::vector<int> audit_per_step;
  std::vector<AuditEvent> audit;
  int arrivals = 0;
  int emergencies = 0;
  std::string config_echo;

  int total_overlaps() const { return static_cast<int>(audit.size()); }
};

/// Instrumentation for the two-phase update; callbacks may run on worker threads.
struct StepHooks {
  std::function<void(int step, const std::string& id)> on_plan;
  std::function<void(int step, const std::string& id)> on_commit;
};

struct StepOptions {
  double goal_radius = 0.5;
  unsigned workers = 1;
  const StepHooks* hooks = nullptr;
};

struct StepReport {
  std::vector<AuditEvent> overlaps;
  int emergencies = 0;
  int arrivals = 0;
  std::vector<nav::PlanResult> plans;  // indexed like world.agents; arrived agents keep defaults
};

/// Pairs of non-arrived agents (and agent/obstacle pairs) whose placed shapes overlap.
std::vector<AuditEvent> audit_overlaps(const World& world);

/// PLAN every active agent against the frozen snapshot, then COMMIT all.
StepReport step(World& world, const nav::NavConfig& cfg, const StepOptions& options = {});

struct RunOptions {
  unsigned workers = 1;
  const StepHooks* hooks = nullptr;
};

TrajectoryLog run(const Scenario& scenario, const RunOptions& options = {});

/// Number of update steps covering `duration`.
int step_count(double duration, double tau);

}  // namespace autorvo::sim
