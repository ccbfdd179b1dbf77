#include "autorvo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

#include "autorvo/errors.hpp"
#include "autorvo/parallel.hpp"

namespace autorvo::eval {

namespace {

constexpr double kTemplateMatch = 1e-6;  // m
constexpr double kStill = 1e-9;          // m, displacement treated as no motion

struct Observed {
  const ResampledTrack* track;
  const sim::AgentState* seed;  // template agent
  Vec2 goal;
};

std::optional<double> direction_between(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  if (norm(d) <= kStill) return std::nullopt;
  return bearing(d);
}

// Heading at step k from central differences, one-sided at the ends.
std::optional<double> estimate_heading(const ResampledTrack& t, int k) {
  if (t.has(k - 1) && t.has(k + 1)) {
    if (auto h = direction_between(t.at(k - 1), t.at(k + 1))) return h;
  }
  if (t.has(k + 1)) {
    if (auto h = direction_between(t.at(k), t.at(k + 1))) return h;
  }
  if (t.has(k - 1)) return direction_between(t.at(k - 1), t.at(k));
  return std::nullopt;
}

sim::AgentState estimate_state(const Observed& o, int k, double tau) {
  const ResampledTrack& t = *o.track;
  const sim::AgentState& seed = *o.seed;
  const Vec2 p = t.at(k);
  if (k == t.first_step && distance(seed.reference_point(), p) <= kTemplateMatch) {
    sim::AgentState a = seed;
    a.goal = o.goal;
    a.arrived = false;
    return a;
  }
  const double theta = estimate_heading(t, k).value_or(seed.heading());
  double v = 0.0;
  if (t.has(k - 1)) {
    v = distance(t.at(k - 1), p) / tau;
  } else if (t.has(k + 1)) {
    v = distance(p, t.at(k + 1)) / tau;
  }
  v = std::min(v, seed.dyn.v_max_type);
  double phi = 0.0;
  if (seed.is_vehicle() && v > kStill && t.has(k - 1)) {
    if (auto prev_theta = estimate_heading(t, k - 1)) {
      const double rate = wrap_angle(theta - *prev_theta) / tau;
      phi = std::atan(seed.dyn.wheelbase * rate / v);
      phi = std::clamp(phi, -seed.dyn.phi_max, seed.dyn.phi_max);
    }
  }
  sim::AgentState a =
      sim::make_agent(seed.id, seed.type, seed.shape, seed.dyn, p, theta, o.goal, v, phi);
  return a;
}

}  // namespace

OneStepErrors one_step_errors(const ReferenceTrajectorySet& reference, const sim::Scenario& scenario,
                              const nav::NavConfig& cfg, unsigned workers) {
  cfg.validate();
  std::map<std::string, const sim::AgentState*> seeds;
  for (const auto& a : scenario.agents) seeds[a.id] = &a;
  for (const auto& r : reference.agents) {
    auto it = seeds.find(r.id);
    if (it == seeds.end()) throw IdMismatch("reference id '" + r.id + "' is not in the scenario");
    if (it->second->type != r.type) {
      throw IdMismatch("reference id '" + r.id + "' has type " + std::string(dynamics::to_string(r.type)) +
                       " but the scenario says " + std::string(dynamics::to_string(it->second->type)));
    }
  }
  for (const auto& [id, _] : seeds) {
    if (!reference.find(id)) throw IdMismatch("scenario id '" + id + "' is not in the reference");
  }

  const auto tracks = resample(reference, cfg.tau);
  std::vector<Observed> observed;
  int first = std::numeric_limits<int>::max();
  int last = std::numeric_limits<int>::min();
  for (const auto& t : tracks) {
    const auto* ra = reference.find(t.id);
    const auto* seed = seeds.at(t.id);
    observed.push_back({&t, seed, ra->goal.value_or(seed->goal)});
    first = std::min(first, t.first_step);
    last = std::max(last, t.last_step());
  }
  OneStepErrors out;
  if (observed.empty() || last <= first) return out;

  const std::size_t n_steps = static_cast<std::size_t>(last - first);
  std::vector<std::vector<AgentError>> per_step(n_steps);
  parallel_for(n_steps, workers, [&](std::size_t s) {
    const int k = first + static_cast<int>(s);
    sim::World world;
    world.obstacles = scenario.obstacles;
    for (const Observed& o : observed) {
      if (!o.track->has(k)) continue;
      world.agents.push_back(estimate_state(o, k, cfg.tau));
      // observed inside the goal radius: arrived, so it stays put and is not a neighbor
      auto& a = world.agents.back();
      a.arrived = distance(a.reference_point(), a.goal) <= scenario.goal_radius;
    }
    const sim::WorldView view = sim::view_of(world);
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      const auto& a = world.agents[i];
      const ResampledTrack* track = nullptr;
      for (const Observed& o : observed) {
        if (o.track->id == a.id) track = o.track;
      }
      if (!track->has(k + 1)) continue;
      Vec2 predicted = a.reference_point();
      if (!a.arrived) {
        const nav::PlanResult plan = nav::plan_step(i, view, cfg);
        predicted = nav::advance_agent(a, plan.selected.v, plan.selected.heading_control, cfg).reference_point();
      }
      per_step[s].push_back({a.id, k, predicted - track->at(k + 1)});
    }
    std::sort(per_step[s].begin(), per_step[s].end(),
              [](const AgentError& x, const AgentError& y) { return x.id < y.id; });
  });
  for (auto& v : per_step) {
    if (!v.empty()) ++out.steps_evaluated;
    out.errors.insert(out.errors.end(), v.begin(), v.end());
  }
  return out;
}

EntropyReport entropy_metric(std::span<const Vec2> errors, double lambda) {
  if (errors.size() < kMinErrorCount) {
    throw InsufficientData("entropy needs at least " + std::to_string(kMinErrorCount) +
                           " errors, got " + std::to_string(errors.size()));
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0, mean_mag = 0.0;
  for (const Vec2& e : errors) {
    sxx += e.x * e.x;
    sxy += e.x * e.y;
    syy += e.y * e.y;
    mean_mag += norm(e);
  }
  const double n = static_cast<double>(errors.size());
  EntropyReport r;
  r.covariance = {{{sxx / n + lambda, sxy / n}, {sxy / n, syy / n + lambda}}};
  const double det = r.covariance[0][0] * r.covariance[1][1] - r.covariance[0][1] * r.covariance[1][0];
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw DegenerateCovariance("error covariance determinant is not positive");
  }
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  r.entropy = 0.5 * (2.0 * std::log(two_pi_e) + std::log(det));
  r.mean_displacement_error = mean_mag / n;
  r.error_count = errors.size();
  return r;
}

EntropyReport evaluate(const ReferenceTrajectorySet& reference, const sim::Scenario& scenario,
                       const nav::NavConfig& cfg, unsigned workers) {
  const OneStepErrors e = one_step_errors(reference, scenario, cfg, workers);
  std::vector<Vec2> flat;
  std::map<std::string, std::pair<double, int>> per_agent;
  for (const AgentError& a : e.errors) {
    flat.push_back(a.error);
    auto& acc = per_agent[a.id];
    acc.first += norm(a.error);
    ++acc.second;
  }
  EntropyReport r = entropy_metric(flat);
  for (const auto& [id, acc] : per_agent) r.per_agent_mean_error[id] = acc.first / acc.second;
  r.steps_evaluated = e.steps_evaluated;
  return r;
}

std::vector<NamedConfig> parse_configs(std::string_view text, const nav::NavConfig& base) {
  sim::Json doc;
  try {
    doc = sim::Json::parse(text);
  } catch (const sim::Json::parse_error& e) {
    throw ParseError(std::string("configs: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("configs") || !doc["configs"].is_array()) {
    throw ParseError("configs: expected {\"configs\": [...]}");
  }
  std::vector<NamedConfig> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc["configs"].size(); ++i) {
    const auto& c = doc["configs"][i];
    const std::string path = "configs[" + std::to_string(i) + "]";
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
      throw ValidationError(path + ".name: missing");
    }
    for (const auto& [key, _] : c.items()) {
      if (key != "name" && key != "nav") throw ValidationError(path + "." + key + ": unknown key");
    }
    NamedConfig nc{c["name"].get<std::string>(), base};
    if (!names.insert(nc.name).second) throw ValidationError(path + ".name: duplicate '" + nc.name + "'");
    if (c.contains("nav")) nc.nav = sim::apply_nav_overrides(base, c["nav"]);
    out.push_back(std::move(nc));
  }
  if (out.empty()) throw ValidationError("configs: empty list");
  return out;
}

std::vector<ComparisonRow> compare_algorithms(const ReferenceTrajectorySet& reference,
                                              const sim::Scenario& scenario,
                                              std::span<const NamedConfig> configs,
                                              unsigned workers) {
  std::vector<ComparisonRow> rows;
  for (const NamedConfig& c : configs) rows.push_back({c.name, evaluate(reference, scenario, c.nav, workers)});
  return rows;
}

std::string comparison_table(std::span<const ComparisonRow> rows, std::string_view title) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::string out;
  if (!title.empty()) out += std::string(title) + "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %12s  %12s  %6s  %7s\n", static_cast<int>(width), "config",
                "entropy", "mean_err_m", "steps", "errors");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %12.6f  %12.6f  %6d  %7zu\n", static_cast<int>(width),
                  r.name.c_str(), r.report.entropy, r.report.mean_displacement_error,
                  r.report.steps_evaluated, r.report.error_count);
    out += buf;
  }
  return out;
}

sim::Json comparison_json(std::span<const ComparisonRow> rows) {
  sim::Json arr = sim::Json::array();
  for (const auto& r : rows) {
    const auto& c = r.report.covariance;
    arr.push_back({{"name", r.name},
                   {"entropy", r.report.entropy},
                   {"mean_displacement_error", r.report.mean_displacement_error},
                   {"per_agent_mean_error", r.report.per_agent_mean_error},
                   {"steps_evaluated", r.report.steps_evaluated},
                   {"error_count", r.report.error_count},
                   {"covariance", {{c[0][0], c[0][1]}, {c[1][0], c[1][1]}}}});
  }
  return {{"configs", arr}};
}

SyntheticReference make_synthetic_reference(const sim::Scenario& fixture,
                                            const nav::NavConfig& generator,
                                            const SyntheticOptions& options, unsigned workers) {
  if (options.frames < 2 || !(options.frame_rate > 0.0)) {
    throw ValidationError("synthetic reference needs >= 2 frames and a positive frame rate");
  }
  const double tau = generator.tau;
  sim::World world = sim::world_from_scenario(fixture);
  const sim::StepOptions step_options{fixture.goal_radius, workers, nullptr};
  const int warmup_steps = sim::step_count(options.warmup, tau);
  for (int k = 0; k < warmup_steps; ++k) sim::step(world, generator, step_options);

  SyntheticReference out;
  out.scenario = fixture;
  out.scenario.nav = generator;
  out.scenario.agents.clear();
  for (const auto& a : world.agents) {
    if (!a.arrived) out.scenario.agents.push_back(a);
  }
  world.agents = out.scenario.agents;
  world.step = 0;
  world.time = 0.0;

  // Positions per agent at every tau step inside the window.
  const double span = (options.frames - 1) / options.frame_rate;
  const int steps = static_cast<int>(std::ceil(span / tau - 1e-9));
  std::map<std::string, std::vector<Vec2>> recorded;
  for (const auto& a : world.agents) recorded[a.id].push_back(a.reference_point());
  for (int k = 0; k < steps; ++k) {
    std::vector<bool> was_arrived;
    for (const auto& a : world.agents) was_arrived.push_back(a.arrived);
    sim::step(world, generator, step_options);
    for (std::size_t i = 0; i < world.agents.size(); ++i) {
      if (!was_arrived[i]) recorded[world.agents[i].id].push_back(world.agents[i].reference_point());
    }
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  out.reference.frame_rate = options.frame_rate;
  for (const auto& a : out.scenario.agents) {
    const auto& pts = recorded[a.id];
    ReferenceAgent ra;
    ra.id = a.id;
    ra.type = a.type;
    ra.disks = std::vector<geometry::Disk>(a.shape.disks().begin(), a.shape.disks().end());
    ra.goal = a.goal;
    for (int f = 0; f < options.frames; ++f) {
      double s = f / options.frame_rate / tau;
      if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
      const auto i = static_cast<std::size_t>(std::floor(s));
      if (i >= pts.size()) break;
      Vec2 p = pts[i];
      const double w = s - static_cast<double>(i);
      if (w > 0.0) {
        if (i + 1 >= pts.size()) break;
        p = pts[i] + (pts[i + 1] - pts[i]) * w;
      }
      if (options.noise_sigma > 0.0) {
        const double nx = noise(rng);
        const double ny = noise(rng);
        p = p + Vec2{nx, ny} * options.noise_sigma;
      }
      ra.frames.push_back({f, p});
    }
    out.reference.agents.push_back(std::move(ra));
  }
  std::sort(out.reference.agents.begin(), out.reference.agents.end(),
            [](const ReferenceAgent& x, const ReferenceAgent& y) { return x.id < y.id; });
  return out;
}

}  // namespace autorvo::eval
