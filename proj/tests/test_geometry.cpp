#include <cmath>
#include <random>

#include "autorvo/errors.hpp"
#include "autorvo/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace autorvo;
using namespace autorvo::geometry;

namespace {

CtmatShape chain(std::vector<Disk> d) { return CtmatShape(std::move(d)); }

}  // namespace

TEST_CASE("shape construction derives pieces, width and bounds") {
  const CtmatShape car({{{-1.35, 0}, 0.9}, {{0, 0}, 0.9}, {{1.35, 0}, 0.9}});
  CHECK(car.pieces().size() == 2);
  CHECK(car.width() == doctest::Approx(1.8));
  CHECK(car.min_forward() == doctest::Approx(-2.25));
  CHECK(car.max_forward() == doctest::Approx(2.25));
  for (const Disk& d : car.disks()) {
    CHECK(distance(d.center, car.bound_center()) + d.radius <= car.bound_radius() + 1e-12);
  }

  const CtmatShape single({{{1, 2}, 0.5}});
  REQUIRE(single.pieces().size() == 1);
  CHECK(single.pieces()[0].disks[0] == single.pieces()[0].disks[1]);

  CHECK_THROWS_AS(CtmatShape(std::vector<Disk>{}), ValidationError);
  CHECK_THROWS_AS(CtmatShape({{{0, 0}, -1}}), ValidationError);
  CHECK_THROWS_AS(CtmatShape({{{NAN, 0}, 1}}), ValidationError);
}

TEST_CASE("placement is a rigid motion that keeps the width") {
  const CtmatShape local({{{0, 0}, 0.5}, {{2, 0.3}, 0.4}}, {1.0, 0.0});
  const CtmatShape placed = place_shape(local, {{5, -1}, M_PI / 2});
  // reference offset (1,0) lands on the pose position; (0,0) is 1 m behind it.
  CHECK(placed.reference_offset().x == doctest::Approx(5));
  CHECK(placed.reference_offset().y == doctest::Approx(-1));
  CHECK(placed.disks()[0].center.x == doctest::Approx(5));
  CHECK(placed.disks()[0].center.y == doctest::Approx(-2));
  CHECK(placed.width() == doctest::Approx(local.width()));
  CHECK(distance(placed.disks()[0].center, placed.disks()[1].center) ==
        doctest::Approx(distance(local.disks()[0].center, local.disks()[1].center)));
}

TEST_CASE("hull signed distance of two disks") {
  const std::vector<Disk> d = {{{0, 0}, 1}, {{4, 0}, 1}};
  CHECK(hull_signed_distance(d, {2, 3}) == doctest::Approx(2));     // above the tangent segment
  CHECK(hull_signed_distance(d, {-3, 0}) == doctest::Approx(2));    // past the end cap
  CHECK(hull_signed_distance(d, {2, 0}) == doctest::Approx(-1));    // center of the capsule
  CHECK(hull_signed_distance(d, {2, 1}) == doctest::Approx(0).epsilon(1e-12));
  CHECK(hull_contains(d, {2, 1}));
  CHECK_FALSE(hull_contains(d, {2, 1.001}));
}

TEST_CASE("point signed distance agrees with the interpolated-disk oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 500; ++i) {
    const auto disks = oracle::random_chain(rng);
    const CtmatShape s(disks);
    const Vec2 q{u(rng), u(rng)};
    const double gap = oracle::point_gap(disks, q);
    const double sd = point_signed_distance(q, s);
    if (gap > 0) {
      CHECK(sd == doctest::Approx(gap).epsilon(1e-7));
    } else if (gap < -1e-7) {
      CHECK(sd < 0);
      CHECK(sd <= gap + 1e-9);  // penetration depth is at least the lerp gap
    }
  }
}

TEST_CASE("point containment matches dense sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  int disagreements = 0, checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto disks = oracle::random_chain(rng);
    const CtmatShape s(disks);
    const CtmatShape zero = place_shape(s, {});
    const auto sum = minkowski_sum(CtmatShape({{{0, 0}, 0}}), zero, true);
    for (int j = 0; j < 20; ++j) {
      const Vec2 q{u(rng), u(rng)};
      if (std::abs(oracle::point_gap(disks, q)) < 1e-3) continue;  // sampling resolution band
      ++checked;
      if (contains_point(sum, q) != oracle::sampled_contains(disks, q)) ++disagreements;
    }
  }
  CHECK(checked > 4000);
  CHECK(disagreements == 0);
}

TEST_CASE("Minkowski sum: origin inside iff the shapes overlap") {
  std::mt19937_64 rng(3);
  int overlaps = 0, apart = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto a = oracle::random_chain(rng);
    const auto b = oracle::random_chain(rng);
    const double gap = oracle::shape_gap(a, b);
    if (std::abs(gap) < 1e-6) continue;
    const CtmatShape sa(a), sb(b);
    const auto sum = minkowski_sum(sa, sb, true);
    CHECK(sum.pieces.size() == sa.pieces().size() * sb.pieces().size());
    const bool expect = gap < 0;
    (expect ? overlaps : apart)++;
    CHECK(contains_origin(sum) == expect);
    CHECK(shapes_overlap(sa, sb) == expect);
    CHECK(shapes_overlap(sb, sa) == expect);
    if (gap > 0) {
      CHECK(shape_signed_distance(sa, sb) == doctest::Approx(gap).epsilon(1e-6));
      CHECK(signed_distance_origin(sum) == doctest::Approx(gap).epsilon(1e-6));
    }
  }
  // both outcomes are exercised
  CHECK(overlaps > 200);
  CHECK(apart > 200);
}

TEST_CASE("Minkowski sum without reflection is the plain sum") {
  const CtmatShape a({{{1, 0}, 0.5}});
  const CtmatShape b({{{0, 2}, 0.25}});
  const auto plus = minkowski_sum(a, b, false);
  CHECK(contains_point(plus, {1, 2}));
  CHECK(signed_distance_point(plus, {1, 2}) == doctest::Approx(-0.75));
  const auto minus = minkowski_sum(a, b, true);
  CHECK(signed_distance_point(minus, {-1, 2}) == doctest::Approx(-0.75));
}

TEST_CASE("touching shapes count as overlapping; margins widen the test") {
  const CtmatShape a({{{0, 0}, 1}});
  const CtmatShape b({{{2, 0}, 1}});
  CHECK(shapes_overlap(a, b));
  const CtmatShape c({{{2.5, 0}, 1}});
  CHECK_FALSE(shapes_overlap(a, c));
  CHECK(shapes_within(a, c, 0.6));
  CHECK_FALSE(shapes_within(a, c, 0.4));
}

TEST_CASE("tangent angles bound the rays that hit the shape") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6, 6);
  int tested = 0;
  for (int i = 0; i < 200; ++i) {
    const auto disks = oracle::random_chain(rng, 1.0);
    const CtmatShape s(disks);
    const Vec2 v{u(rng), u(rng)};
    if (oracle::point_gap(disks, v) < 0.5) continue;
    ++tested;
    const TangentInterval ti = tangent_angles(v, s);
    CHECK(ti.lo <= ti.hi);
    // rays just inside the interval hit, rays just outside miss
    auto hits = [&](double ang) { return oracle::ray_gap(disks, v, unit_from_angle(ang)) <= 0; };
    CHECK(hits(ti.lo + 0.01));
    CHECK(hits(ti.hi - 0.01));
    CHECK_FALSE(hits(ti.lo - 0.01));
    CHECK_FALSE(hits(ti.hi + 0.01));
    CHECK(std::abs(oracle::point_gap(disks, ti.lo_point)) < 1e-6);
    CHECK(std::abs(oracle::point_gap(disks, ti.hi_point)) < 1e-6);
  }
  CHECK(tested > 50);
  CHECK_THROWS_AS(tangent_angles({0, 0}, chain({{{0, 0}, 1}})), ViewpointInsideShape);
}

TEST_CASE("single disk at distance d spans asin(r/d) each side") {
  const TangentInterval ti = tangent_angles({0, 0}, chain({{{10, 0}, 5}}));
  CHECK(ti.lo == doctest::Approx(-std::asin(0.5)));
  CHECK(ti.hi == doctest::Approx(std::asin(0.5)));
}
