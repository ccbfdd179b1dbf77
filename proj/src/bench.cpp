#include "autorvo/bench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <set>

#include "autorvo/errors.hpp"
#include "autorvo/scenario_io.hpp"

namespace autorvo::bench {

namespace {

// CPU time of the calling thread; unlike wall time it ignores preemption.
double thread_cpu_ms() {
  timespec t{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &t);
  return static_cast<double>(t.tv_sec) * 1e3 + static_cast<double>(t.tv_nsec) * 1e-6;
}

}  // namespace

std::pair<int, int> sample_grid(int m) {
  if (m < 4) throw ValidationError("bench: sample count must be >= 4");
  for (int a = static_cast<int>(std::sqrt(static_cast<double>(m))); a >= 2; --a) {
    if (m % a == 0) return {m / a, a};
  }
  throw ValidationError("bench: sample count " + std::to_string(m) + " has no grid factorization");
}

sim::World synthetic_world(const sim::Scenario& base, int neighbors) {
  using dynamics::AgentType;
  auto params = [&](AgentType t) {
    auto it = base.agent_types.find(t);
    return it != base.agent_types.end() ? it->second : dynamics::default_params(t);
  };
  auto agent = [&](const std::string& id, AgentType t, Vec2 p, double theta, Vec2 goal, double v) {
    const auto dyn = params(t);
    auto disks = dynamics::default_shape(t);
    const Vec2 ref = sim::default_reference_offset(t, disks, dyn.wheelbase);
    return sim::make_agent(id, t, geometry::CtmatShape(std::move(disks), ref), dyn, p, theta, goal,
                           v, 0.0);
  };

  sim::World w;
  w.agents.push_back(agent("subject", AgentType::Car, {0.0, 0.0}, 0.0, {60.0, 0.0}, 3.0));
  // Ring radius grows with N so that tangentially oriented cars do not touch.
  const double radius = std::min(18.0, std::max(9.0, neighbors * 7.0 / (2.0 * std::numbers::pi)));
  for (int i = 0; i < neighbors; ++i) {
    const double ang = 2.0 * std::numbers::pi * i / std::max(1, neighbors) + 0.3;
    const Vec2 p = unit_from_angle(ang) * radius;
    const double heading = ang + std::numbers::pi / 2;
    w.agents.push_back(agent("n" + std::to_string(i), AgentType::Car, p, heading,
                             p + unit_from_angle(heading) * 30.0, 2.0));
  }
  return w;
}

double time_plan_ms(const sim::World& world, const nav::NavConfig& cfg, int reps, int rounds) {
  const sim::WorldView view = sim::view_of(world);
  double best = std::numeric_limits<double>::infinity();
  volatile double sink = 0.0;
  for (int r = 0; r < std::max(1, rounds); ++r) {
    const double t0 = thread_cpu_ms();
    for (int i = 0; i < reps; ++i) sink = sink + nav::plan_step(0, view, cfg).selected.v;
    best = std::min(best, (thread_cpu_ms() - t0) / reps);
  }
  return best;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  LinearFit f;
  f.points = static_cast<int>(x.size());
  if (x.size() < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

namespace {

// Least squares for R = alpha*N*M + beta*N + gamma via 3x3 normal equations.
std::array<double, 3> fit_model(std::span<const Point> pts) {
  std::array<std::array<double, 4>, 3> a{};
  for (const Point& p : pts) {
    const std::array<double, 3> row = {double(p.neighbors) * p.samples, double(p.neighbors), 1.0};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[i][j] += row[i] * row[j];
      a[i][3] += row[i] * p.mean_ms;
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    if (std::abs(a[c][c]) < 1e-12) return {0.0, 0.0, 0.0};
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double k = a[r][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[r][j] -= k * a[c][j];
    }
  }
  return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

template <class T>
T closest(std::span<const T> values, T target) {
  return *std::min_element(values.begin(), values.end(), [&](T a, T b) {
    return std::abs(a - target) < std::abs(b - target) || (std::abs(a - target) == std::abs(b - target) && a < b);
  });
}

}  // namespace

Report run(const sim::Scenario& base, std::span<const int> neighbors, std::span<const int> samples,
           int reps) {
  if (neighbors.empty() || samples.empty()) throw ValidationError("bench: empty sweep");
  if (reps < 1) throw ValidationError("bench: reps must be >= 1");
  for (int n : neighbors) {
    if (n < 0) throw ValidationError("bench: neighbor count must be >= 0");
  }
  Report rep;
  std::vector<sim::World> worlds;
  std::vector<nav::NavConfig> configs;
  for (int n : neighbors) {
    for (int m : samples) {
      const auto [sv, sp] = sample_grid(m);
      nav::NavConfig cfg = base.nav;
      cfg.samples_v = sv;
      cfg.samples_phi = sp;
      worlds.push_back(synthetic_world(base, n));
      configs.push_back(cfg);
      rep.points.push_back({n, m, sv, sp, std::numeric_limits<double>::infinity()});
    }
  }
  // Passes sweep the whole grid so slow phases of the machine hit every point alike.
  constexpr int kPasses = 15;
  for (int pass = 0; pass < kPasses; ++pass) {
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      rep.points[i].mean_ms = std::min(rep.points[i].mean_ms, time_plan_ms(worlds[i], configs[i], reps, 1));
    }
  }
  auto distinct = [](std::span<const int> v) { return std::set<int>(v.begin(), v.end()).size(); };
  // N*M, N and 1 are linearly independent only with two or more values on each axis.
  rep.model_determined = distinct(neighbors) >= 2 && distinct(samples) >= 2;
  const auto coeff = rep.model_determined ? fit_model(rep.points) : std::array<double, 3>{};
  rep.alpha = coeff[0];
  rep.beta = coeff[1];
  rep.gamma = coeff[2];
  double ss_res = 0, ss_tot = 0, mean = 0;
  for (const Point& p : rep.points) mean += p.mean_ms;
  mean /= rep.points.size();
  for (const Point& p : rep.points) {
    const double pred = rep.alpha * p.neighbors * p.samples + rep.beta * p.neighbors + rep.gamma;
    ss_res += (p.mean_ms - pred) * (p.mean_ms - pred);
    ss_tot += (p.mean_ms - mean) * (p.mean_ms - mean);
  }
  rep.model_rms_ms = std::sqrt(ss_res / rep.points.size());
  rep.model_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;

  rep.series_samples = closest(samples, 100);
  rep.series_neighbors = closest(neighbors, 5);
  std::vector<double> xn, yn, xm, ym;
  for (const Point& p : rep.points) {
    if (p.samples == rep.series_samples) {
      xn.push_back(p.neighbors);
      yn.push_back(p.mean_ms);
    }
    if (p.neighbors == rep.series_neighbors) {
      xm.push_back(p.samples);
      ym.push_back(p.mean_ms);
    }
  }
  rep.fit_in_n = fit_line(xn, yn);
  rep.fit_in_m = fit_line(xm, ym);
  return rep;
}

std::string report_csv(const Report& r) {
  std::string out = "neighbors,samples,samples_v,samples_phi,mean_ms\n";
  char buf[128];
  for (const Point& p : r.points) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.6f\n", p.neighbors, p.samples, p.samples_v,
                  p.samples_phi, p.mean_ms);
    out += buf;
  }
  return out;
}

std::string report_summary(const Report& r) {
  std::string out;
  char buf[256];
  if (r.model_determined) {
    std::snprintf(buf, sizeof buf, "model: R = %.6g*N*M + %.6g*N + %.6g ms (rms %.4f ms, R^2 %.4f)\n", r.alpha,
                  r.beta, r.gamma, r.model_rms_ms, r.model_r2);
  } else {
    std::snprintf(buf, sizeof buf, "model: needs at least two neighbor counts and two sample counts\n");
  }
  out += buf;
  auto series = [&](const char* axis, const char* fixed, int value, const char* unit, const LinearFit& f) {
    if (f.points >= 2) {
      std::snprintf(buf, sizeof buf, "series %s at %s=%d: slope %.6g ms/%s, R^2 %.4f (%d points)\n", axis, fixed,
                    value, f.slope, unit, f.r2, f.points);
    } else {
      std::snprintf(buf, sizeof buf, "series %s at %s=%d: fewer than 2 points\n", axis, fixed, value);
    }
    out += buf;
  };
  series("N", "M", r.series_samples, "neighbor", r.fit_in_n);
  series("M", "N", r.series_neighbors, "sample", r.fit_in_m);
  return out;
}

}  // namespace autorvo::bench
