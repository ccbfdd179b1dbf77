#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autorvo/geometry.hpp"
#include "autorvo/scenario_io.hpp"

namespace autorvo::eval {

using dynamics::AgentType;

struct ReferenceFrame {
  int frame = 0;
  Vec2 position;
};

struct ReferenceAgent {
  std::string id;
  AgentType type = AgentType::Car;
  std::optional<std::vector<geometry::Disk>> disks;
  std::optional<Vec2> goal;
  std::vector<ReferenceFrame> frames;  // strictly increasing frame numbers
};

/// Observed reference-point positions at a fixed frame rate. Agents sorted by id.
struct ReferenceTrajectorySet {
  double frame_rate = 30.0;
  std::vector<ReferenceAgent> agents;

  const ReferenceAgent* find(std::string_view id) const;
};

/// CSV `frame,id,x,y` plus sidecar JSON
/// `{"frame_rate": f, "agents": {"<id>": {"type": t, "disks": [...], "goal": [x, y]}}}`.
/// Throws ParseError on malformed input and IdMismatch when the two disagree on ids.
ReferenceTrajectorySet parse_reference(std::string_view csv, std::string_view sidecar);
ReferenceTrajectorySet load_reference(const std::filesystem::path& csv,
                                      const std::filesystem::path& sidecar);

std::string reference_csv(const ReferenceTrajectorySet& ref);
sim::Json reference_sidecar(const ReferenceTrajectorySet& ref);

/// One agent's positions on the tau grid: positions[i] is at time (first_step + i) * tau,
/// time 0 being the earliest frame of the whole set.
struct ResampledTrack {
  std::string id;
  int first_step = 0;
  std::vector<Vec2> positions;

  int last_step() const { return first_step + static_cast<int>(positions.size()) - 1; }
  bool has(int step) const { return step >= first_step && step <= last_step(); }
  Vec2 at(int step) const { return positions[static_cast<std::size_t>(step - first_step)]; }
};

/// Linear interpolation of every agent onto the tau grid, covering only steps
/// inside the agent's observed time span.
std::vector<ResampledTrack> resample(const ReferenceTrajectorySet& ref, double tau);

}  // namespace autorvo::eval
