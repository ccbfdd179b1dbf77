#include <cmath>

#include "autorvo/bench.hpp"
#include "autorvo/errors.hpp"
#include "autorvo/scenario_io.hpp"
#include "doctest.h"

using namespace autorvo;
using namespace autorvo::bench;

TEST_CASE("sample counts split into near-square grids") {
  CHECK(sample_grid(25) == std::pair{5, 5});
  CHECK(sample_grid(100) == std::pair{10, 10});
  CHECK(sample_grid(12) == std::pair{4, 3});
  CHECK(sample_grid(400) == std::pair{20, 20});
  CHECK_THROWS_AS(sample_grid(3), ValidationError);
  CHECK_THROWS_AS(sample_grid(97), ValidationError);
}

TEST_CASE("least-squares line") {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<double> y = {3, 5, 7, 9};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r2 == doctest::Approx(1));
  const std::vector<double> noisy = {3, 6, 6, 10};
  const auto g = fit_line(x, noisy);
  // closed form: slope = cov(x,y)/var(x)
  CHECK(g.slope == doctest::Approx(2.1));
  CHECK(g.intercept == doctest::Approx(6.25 - 2.1 * 2.5));
  CHECK(g.r2 < 1.0);
  CHECK(g.r2 > 0.8);
}

TEST_CASE("synthetic world has exactly N neighbors in range and no overlaps") {
  const auto base = sim::load_scenario("{}");
  for (int n : {0, 1, 4, 5, 8, 16}) {
    const auto w = synthetic_world(base, n);
    REQUIRE(w.agents.size() == static_cast<std::size_t>(n + 1));
    CHECK(sim::neighbors_of(sim::view_of(w), 0, base.nav.detection_radius).size() == static_cast<std::size_t>(n));
    CHECK(sim::audit_overlaps(w).empty());
  }
}

TEST_CASE("a tiny benchmark reports every grid point and a fit") {
  const auto base = sim::load_scenario("{}");
  const std::vector<int> ns = {1, 3, 5};
  const std::vector<int> ms = {25, 100};
  const auto r = run(base, ns, ms, 2);
  CHECK(r.points.size() == 6);
  CHECK(r.series_samples == 100);
  CHECK(r.series_neighbors == 5);
  for (const auto& p : r.points) CHECK(p.mean_ms > 0);
  const auto csv = report_csv(r);
  CHECK(csv.rfind("neighbors,samples,samples_v,samples_phi,mean_ms\n", 0) == 0);
}
