#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "autorvo/simulator.hpp"

namespace autorvo::bench {

/// Splits M candidates into a (samples_v, samples_phi) grid as square as possible
/// (25 -> 5x5, 100 -> 10x10, 12 -> 4x3). Throws ValidationError for M < 4 or prime M.
std::pair<int, int> sample_grid(int m);

/// A car at the origin heading +x plus exactly `neighbors` cars on a ring
/// inside the detection radius, driving tangentially. The scenario supplies
/// the per-type parameters.
sim::World synthetic_world(const sim::Scenario& base, int neighbors);

/// Mean thread CPU time (ms) of one plan_step for agent 0; best of `rounds` batches
/// of `reps` calls each.
double time_plan_ms(const sim::World& world, const nav::NavConfig& cfg, int reps, int rounds = 3);

struct Point {
  int neighbors = 0;
  int samples = 0;
  int samples_v = 0;
  int samples_phi = 0;
  double mean_ms = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

struct Report {
  std::vector<Point> points;
  // R ~ alpha N M + beta N + gamma over all points.
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double model_rms_ms = 0.0;
  double model_r2 = 0.0;
  bool model_determined = false;
  int series_samples = 0;    // M held fixed for the N series
  int series_neighbors = 0;  // N held fixed for the M series
  LinearFit fit_in_n;
  LinearFit fit_in_m;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

Report run(const sim::Scenario& base, std::span<const int> neighbors, std::span<const int> samples,
           int reps);

std::string report_csv(const Report& r);
std::string report_summary(const Report& r);

}  // namespace autorvo::bench
