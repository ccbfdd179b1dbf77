#pragma once

#include <filesystem>
#include <string>

#include "autorvo/scenario_io.hpp"
#include "autorvo/simulator.hpp"

namespace autorvo::sim {

/// `step,time,id,type,x,y,theta,v,phi,b`, rows ordered by step then id.
/// Numbers use fixed `%.9f`; `phi` is empty for pedestrians. See docs/formats.md.
std::string trajectory_csv(const TrajectoryLog& log);

Json trajectory_json(const TrajectoryLog& log);

/// Overwrites `path`; throws Error if the file cannot be written.
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string format_fixed(double x);

}  // namespace autorvo::sim
