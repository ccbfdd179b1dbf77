#pragma once

// Per-agent decision pipeline: free-space search over fan spaces, preferred
// steering and speed, lookahead adjustment, sampled controls, Minkowski-sum
// collision filtering and the weighted cost selection.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autorvo/dynamics.hpp"
#include "autorvo/geometry.hpp"
#include "autorvo/world.hpp"

namespace autorvo::nav {

using sim::AgentState;
using sim::Behavior;
using sim::WorldView;

struct CostWeights {
  double a = 1.0;   // preferred control
  double b = 0.5;   // smoothness
  double c = 0.05;  // type-weighted proximity
  double d = 2.0;   // Minkowski clearance
  double e = 0.2;   // goal distance

  void validate() const;
  CostWeights scaled(double k) const { return {a * k, b * k, c * k, d * k, e * k}; }
};

struct NavConfig {
  double sigma = 1.5;
  double detection_radius = 20.0;
  double tau = 0.2;
  double kappa = 1.0;
  int substeps_collision = 5;
  int integration_substeps = 5;
  int samples_v = 10;
  int samples_phi = 10;
  double speedup_factor = 1.25;
  CostWeights weights;
  /// Off = the no-dynamics ablation: full control box, no speed bounds.
  bool dynamics = true;
  bool f3_clamp_nonnegative = false;
  /// Candidates closer than this to any predicted neighbor are rejected (m).
  double safety_margin = 0.0;
  /// Also reject candidates that would hit a neighbor that stops in place.
  bool guard_stopped_neighbors = true;
  /// Lower bound on the half-width of a vehicle's heading window (rad).
  double min_heading_window = 10.0 * 3.14159265358979323846 / 180.0;

  void validate() const;
};

struct FanSpace {
  Vec2 bisector;
  double half_angle_left = 0.0;
  double half_angle_right = 0.0;
  double width = 0.0;
  /// [0] bounds the clockwise (right) side, [1] the counter-clockwise (left) side.
  std::array<Vec2, 2> bounding_points;
  std::array<double, 2> boundary_distance{};
  std::array<bool, 2> from_window{};
  double right_angle = 0.0;  // absolute, unwrapped
  double left_angle = 0.0;   // right_angle + extent

  double extent() const { return left_angle - right_angle; }
  bool contains(Vec2 direction) const;
};

/// Heading window: nullopt = full circle (pedestrians).
std::vector<FanSpace> compute_fan_spaces(Vec2 viewpoint, double heading,
                                         std::optional<double> window_half,
                                         std::span<const geometry::CtmatShape> occluders,
                                         double detection_radius);

/// Half-width of the heading window for an agent, nullopt for pedestrians.
std::optional<double> heading_window(const AgentState& agent, const NavConfig& cfg);

std::vector<FanSpace> compute_fan_spaces(const AgentState& agent,
                                         std::span<const geometry::CtmatShape> occluders,
                                         const NavConfig& cfg);

bool in_free_space(std::span<const FanSpace> fans, Vec2 h, double agent_width, double sigma);

Vec2 preferred_direction(std::span<const FanSpace> fans, Vec2 h, double agent_width,
                         double sigma);

enum class PredictionMode { Normal, Stop, SpeedUp };

struct PreferredCommand {
  double v_o = 0.0;
  PredictionMode mode = PredictionMode::Normal;
  double v_max = 0.0;
  double clearance = 0.0;
};

/// Corridor clearance ahead of the agent's front, capped at `cap`.
double forward_clearance(const AgentState& agent,
                         std::span<const geometry::CtmatShape> neighbors, double cap);

/// Compares free-space around h now and after all neighbors coast for kappa.
PreferredCommand prediction_adjust(const AgentState& agent, std::span<const AgentState> neighbors,
                                   std::span<const geometry::CtmatShape> obstacles, Vec2 h,
                                   double phi_o, const NavConfig& cfg);

struct CostTerms {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;
  double f5 = 0.0;
};

struct ControlSample {
  double v = 0.0;
  double heading_control = 0.0;  // phi or theta
  bool collision_free = false;
  CostTerms terms;
  double total_cost = std::numeric_limits<double>::infinity();
  int grid_index = 0;
};

/// Even samples_v x samples_phi grid over the reachable box (row-major, both
/// axes ascending). Throws EmptyRange when the box is a single point.
std::vector<ControlSample> sample_controls(const AgentState& agent, const NavConfig& cfg,
                                           double heading_o);

/// A neighbor (agent or static obstacle) predicted over one planning interval.
struct NeighborTrack {
  std::string id;
  int type_code = 0;
  bool obstacle = false;
  geometry::CtmatShape now;
  std::vector<geometry::CtmatShape> checkpoints;  // t = k tau / n, k = 1..n
  Vec2 ref_end;
  double sweep_radius = 0.0;  // bound radius plus travel over tau
};

std::vector<NeighborTrack> build_tracks(const AgentState& agent, const WorldView& world,
                                        std::span<const sim::Neighbor> neighbors,
                                        const NavConfig& cfg);

/// Agent placements at the collision checkpoints for one control.
std::vector<geometry::CtmatShape> agent_checkpoints(const AgentState& agent, double v,
                                                    double heading_control,
                                                    const NavConfig& cfg);

AgentState advance_agent(const AgentState& agent, double v, double heading_control,
                         const NavConfig& cfg);

void filter_collision_free(const AgentState& agent, std::vector<ControlSample>& samples,
                           std::span<const NeighborTrack> tracks, const NavConfig& cfg);

struct Preferred {
  double v_o = 0.0;
  double heading_o = 0.0;  // phi_o or theta_o
};

void evaluate_cost(const AgentState& agent, ControlSample& sample,
                   std::span<const NeighborTrack> tracks, const NavConfig& cfg,
                   const Preferred& preferred);

/// Throws NoCandidate when nothing is collision-free.
const ControlSample& select_control(std::span<const ControlSample> candidates);

struct PlanResult {
  ControlSample selected;
  Behavior behavior = Behavior::GoAhead;
  PreferredCommand preferred;
  Vec2 preferred_direction;
  double heading_o = 0.0;
  bool emergency = false;
  std::size_t neighbor_count = 0;
  std::size_t candidate_count = 0;
};

Behavior behavior_for(const AgentState& agent, double v, double heading_control);

/// Full pipeline for world.agents[agent_index] against an immutable snapshot.
PlanResult plan_step(std::size_t agent_index, const WorldView& world, const NavConfig& cfg);

}  // namespace autorvo::nav
