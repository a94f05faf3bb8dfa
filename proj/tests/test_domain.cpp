#include <cmath>
#include <numbers>

#include "corner_euler/domain.hpp"
#include "doctest.h"

using namespace corner_euler;
using std::numbers::pi;

TEST_CASE("contains: analytic membership per kind") {
  CHECK(contains(make_unit_disk(), {0.3, 0.4}));
  CHECK_FALSE(contains(make_sector(pi / 2), {0.5, -0.1}));
  CHECK(contains(make_half_disk(), {0.0, 0.999}));

  // Boundary points are not interior.
  CHECK_FALSE(contains(make_unit_disk(), {1.0, 0.0}));
  CHECK_FALSE(contains(make_half_disk(), {0.5, 0.0}));
  CHECK_FALSE(contains(make_sector(pi / 4), {0.0, 0.0}));
  CHECK_FALSE(contains(make_sector(pi / 4), polar(0.5, pi / 4)));
  CHECK(contains(make_sector(pi / 4), polar(0.5, pi / 8)));
}

TEST_CASE("corner invariants") {
  for (const DomainSpec& d : {make_half_disk(), make_sector(pi / 2), make_sector(pi / 4), make_sector(0.3)}) {
    for (const Corner& c : d.corners) {
      CHECK(c.theta > 0.0);
      CHECK(c.theta <= pi / 2);
      CHECK(c.alpha == 1.0 - c.theta / pi);
      CHECK(c.alpha >= 0.5);
      CHECK(c.alpha < 1.0);
      CHECK(std::abs(norm(c.disk_image) - 1.0) <= 1e-12);
    }
    CHECK(d.delta > 0.0);
    CHECK(d.delta < min_corner_separation(d) / 3.0);
  }
  CHECK(make_unit_disk().corners.empty());
  CHECK(make_half_disk().corners.size() == 2);
  const DomainSpec s = make_sector(pi / 3);
  REQUIRE(s.corners.size() == 3);
  CHECK(s.corners[0].theta == doctest::Approx(pi / 3));
}

TEST_CASE("validation rejects bad parameters with the field name") {
  CHECK_THROWS_WITH_AS(make_sector(2.0), doctest::Contains("theta0"), std::invalid_argument);
  CHECK_THROWS_AS(make_sector(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_sector(-0.5), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_half_disk(1.0), doctest::Contains("delta"), std::invalid_argument);
  CHECK_NOTHROW(make_sector(pi / 2));
}

TEST_CASE("area and bounding box") {
  CHECK(area(make_unit_disk()) == doctest::Approx(pi));
  CHECK(area(make_half_disk()) == doctest::Approx(pi / 2));
  CHECK(area(make_sector(pi / 2)) == doctest::Approx(pi / 4));
  const BoundingBox b = bounding_box(make_sector(pi / 2));
  CHECK(b.lo.x <= 0.0);
  CHECK(b.lo.y <= 0.0);
  CHECK(b.hi.x >= 1.0);
  CHECK(b.hi.y >= 1.0);
}

TEST_CASE("sample_interior") {
  SUBCASE("unit disk") {
    const auto pts = sample_interior(make_unit_disk(), 100, 7);
    REQUIRE(pts.size() == 100);
    for (Vec2 p : pts) CHECK(norm(p) < 1.0);
  }
  SUBCASE("sector(pi/4)") {
    const auto pts = sample_interior(make_sector(pi / 4), 50, 7);
    REQUIRE(pts.size() == 50);
    for (Vec2 p : pts) {
      const double a = std::atan2(p.y, p.x);
      CHECK(a > 0.0);
      CHECK(a < pi / 4);
    }
  }
  SUBCASE("deterministic in seed") {
    const DomainSpec d = make_half_disk();
    CHECK(sample_interior(d, 64, 11) == sample_interior(d, 64, 11));
    CHECK(sample_interior(d, 64, 11) != sample_interior(d, 64, 12));
  }
  SUBCASE("uniform in area") {
    // Fraction of a sector sample below radius 1/2 is 1/4.
    const auto pts = sample_interior(make_sector(pi / 2), 40000, 3);
    double inner = 0;
    for (Vec2 p : pts) inner += norm(p) < 0.5;
    CHECK(inner / pts.size() == doctest::Approx(0.25).epsilon(0.03));
  }
}

TEST_CASE("nearest_corner") {
  const DomainSpec s = make_sector(pi / 2);
  const NearestCorner a = nearest_corner(s, {0.1, 0.05});
  CHECK(a.index == 0);
  CHECK(a.distance == doctest::Approx(std::sqrt(0.01 + 0.0025)));

  const DomainSpec h = make_half_disk();
  const NearestCorner b = nearest_corner(h, {0.9, 0.1});
  CHECK(b.corner->vertex == Vec2{1.0, 0.0});
  CHECK(b.distance == doctest::Approx(std::sqrt(0.02)));

  // Equidistant from both half-disk corners.
  CHECK(nearest_corner(h, {0.0, 0.5}).index == 0);

  CHECK_THROWS_AS(nearest_corner(make_unit_disk(), {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("kind names round trip") {
  for (DomainKind k : {DomainKind::unit_disk, DomainKind::half_disk, DomainKind::sector}) {
    CHECK(domain_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(domain_kind_from_string("annulus"), std::invalid_argument);
}
