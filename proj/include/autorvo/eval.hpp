#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "autorvo/reference.hpp"
#include "autorvo/simulator.hpp"

namespace autorvo::eval {

inline constexpr double kCovarianceRegularization = 1e-6;  // m^2
inline constexpr std::size_t kMinErrorCount = 10;

struct AgentError {
  std::string id;
  int step = 0;  // error at step + 1
  Vec2 error;
};

struct OneStepErrors {
  std::vector<AgentError> errors;  // ordered by step, then id
  int steps_evaluated = 0;
};

/// Re-initializes every observed agent from the reference at each step,
/// advances the simulator once and records simulated - observed positions.
/// Agents whose template pose matches the first observation start from the
/// template state; elsewhere the state is estimated from the positions.
/// Throws IdMismatch when reference and template ids or types differ.
OneStepErrors one_step_errors(const ReferenceTrajectorySet& reference, const sim::Scenario& scenario,
                              const nav::NavConfig& cfg, unsigned workers = 1);

struct EntropyReport {
  std::array<std::array<double, 2>, 2> covariance{};
  double entropy = 0.0;  // nats
  double mean_displacement_error = 0.0;
  std::map<std::string, double> per_agent_mean_error;
  int steps_evaluated = 0;
  std::size_t error_count = 0;
};

/// Zero-mean covariance of the pooled 2D errors plus lambda*I, and
/// 0.5 ln((2 pi e)^2 det). Throws InsufficientData below kMinErrorCount errors,
/// DegenerateCovariance when the determinant is not positive.
EntropyReport entropy_metric(std::span<const Vec2> errors,
                             double lambda = kCovarianceRegularization);

EntropyReport evaluate(const ReferenceTrajectorySet& reference, const sim::Scenario& scenario,
                       const nav::NavConfig& cfg, unsigned workers = 1);

struct NamedConfig {
  std::string name;
  nav::NavConfig nav;
};

/// `{"configs": [{"name": "...", "nav": {partial nav overrides}}, ...]}`,
/// applied on top of `base`.
std::vector<NamedConfig> parse_configs(std::string_view text, const nav::NavConfig& base);

struct ComparisonRow {
  std::string name;
  EntropyReport report;
};

/// One report per config, in the given order.
std::vector<ComparisonRow> compare_algorithms(const ReferenceTrajectorySet& reference,
                                              const sim::Scenario& scenario,
                                              std::span<const NamedConfig> configs,
                                              unsigned workers = 1);

std::string comparison_table(std::span<const ComparisonRow> rows, std::string_view title = {});
sim::Json comparison_json(std::span<const ComparisonRow> rows);

struct SyntheticOptions {
  double warmup = 3.0;      // s simulated before the window opens
  int frames = 50;
  double frame_rate = 30.0;
  double noise_sigma = 0.0;  // m, per coordinate
  std::uint64_t seed = 0;
};

struct SyntheticReference {
  ReferenceTrajectorySet reference;
  sim::Scenario scenario;  // world state when the window opens
};

/// Simulates `fixture` under `generator`, then records a window of
/// reference-point positions at the frame rate with optional Gaussian noise.
SyntheticReference make_synthetic_reference(const sim::Scenario& fixture,
                                            const nav::NavConfig& generator,
                                            const SyntheticOptions& options, unsigned workers = 1);

}  // namespace autorvo::eval
