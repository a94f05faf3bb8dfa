#include <cmath>
#include <numbers>
#include <random>

#include "corner_euler/biot_savart.hpp"
#include "doctest.h"

using namespace corner_euler;
using std::numbers::pi;

namespace {

// Textbook image-method kernel, evaluated literally.
Vec2 oracle_kernel(Vec2 y, Vec2 z) {
  if (norm2(z) == 0.0) return perp(y / norm2(y)) / (2.0 * pi);
  const Vec2 zs = z / norm2(z);
  const Vec2 f = (y - z) / norm2(y - z) - (y - zs) / norm2(y - zs);
  return perp(f) / (2.0 * pi);
}

Vec2 random_in_disk(std::mt19937_64& rng, double rmax = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return polar(rmax * std::sqrt(u(rng)), 2.0 * pi * u(rng));
}

}  // namespace

TEST_CASE("image_point") {
  CHECK(image_point({0.5, 0.0}) == Vec2{2.0, 0.0});
  CHECK(image_point({0.0, -0.25}) == Vec2{0.0, -4.0});
  const Vec2 on = image_point({0.6, 0.8});
  CHECK(on.x == doctest::Approx(0.6));
  CHECK(on.y == doctest::Approx(0.8));
  CHECK_THROWS_AS(image_point({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("kernel_disk hand values") {
  const Vec2 a = kernel_disk({0.5, 0.0}, {0.0, 0.0});
  CHECK(a.x == doctest::Approx(0.0));
  CHECK(a.y == doctest::Approx(1.0 / pi));
  const Vec2 b = kernel_disk({1.0, 0.0}, {0.5, 0.0});
  CHECK(b.x == doctest::Approx(0.0));
  CHECK(b.y == doctest::Approx(3.0 / (2.0 * pi)));
  CHECK(norm(b) * 0.5 == doctest::Approx(3.0 / (4.0 * pi)));
  CHECK(norm(b) * 0.5 <= 2.0 / pi);
  CHECK_THROWS_AS(kernel_disk({0.2, 0.1}, {0.2, 0.1}), std::invalid_argument);
}

TEST_CASE("kernel_disk agrees with the literal image formula") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20000; ++i) {
    const Vec2 y = random_in_disk(rng);
    const Vec2 z = random_in_disk(rng, 0.999);
    if (norm(y - z) < 1e-6) continue;
    const Vec2 k = kernel_disk(y, z);
    const Vec2 o = oracle_kernel(y, z);
    CHECK(norm(k - o) <= 1e-10 * (1.0 + norm(o)));
  }
  // z = 0 branch and its continuity.
  const Vec2 y{0.3, -0.4};
  CHECK(norm(kernel_disk(y, {0.0, 0.0}) - oracle_kernel(y, {0.0, 0.0})) < 1e-15);
  CHECK(norm(kernel_disk(y, {1e-9, 0.0}) - kernel_disk(y, {0.0, 0.0})) < 1e-8);
  CHECK(norm(kernel_disk(y, {1e-300, 0.0}) - kernel_disk(y, {0.0, 0.0})) < 1e-15);
}

TEST_CASE("property: tangency on the unit circle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const Vec2 y = polar(1.0, u(rng));
    const Vec2 z = random_in_disk(rng);
    worst = std::max(worst, std::abs(dot(kernel_disk(y, z), y)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("property: K1 bound |K||y - z| <= 2/pi") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    const Vec2 y = random_in_disk(rng);
    const Vec2 z = random_in_disk(rng);
    if (y == z) continue;
    CHECK(norm(kernel_disk(y, z)) * norm(y - z) <= 2.0 / pi);
  }
}

TEST_CASE("property: free-space part is antisymmetric under swap") {
  // K(y,z) + K(z,y) keeps only the two image terms.
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 y = random_in_disk(rng, 0.95);
    const Vec2 z = random_in_disk(rng, 0.95);
    const Vec2 ys = y / norm2(y), zs = z / norm2(z);
    const Vec2 images = -perp((y - zs) / norm2(y - zs) + (z - ys) / norm2(z - ys)) / (2.0 * pi);
    const Vec2 sum = kernel_disk(y, z) + kernel_disk(z, y);
    CHECK(norm(sum - images) <= 1e-9 * (1.0 + norm(kernel_disk(y, z))));
  }
}

TEST_CASE("kernel_difference") {
  const Vec2 z{0.1, 0.2};
  CHECK(kernel_difference({0.5, 0.5}, {0.5, 0.5}, z) == Vec2{0.0, 0.0});
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 y1 = random_in_disk(rng), y2 = random_in_disk(rng), w = random_in_disk(rng);
    const Vec2 d = kernel_difference(y1, y2, w);
    CHECK(norm(d + kernel_difference(y2, y1, w)) <= 1e-12 * (1.0 + norm(d)));
    CHECK(norm(d - (kernel_disk(y1, w) - kernel_disk(y2, w))) <= 1e-12 * (1.0 + norm(d)));
  }
  CHECK_THROWS_AS(kernel_difference({0.1, 0.2}, {0.3, 0.0}, z), std::invalid_argument);
}

TEST_CASE("velocity_disk") {
  const ConformalMap id(make_unit_disk());
  SUBCASE("single vortex at the centre") {
    const Vec2 u = velocity_disk(id, single_vortex({0.0, 0.0}, 1.0), {0.5, 0.0});
    CHECK(u.x == doctest::Approx(0.0));
    CHECK(u.y == doctest::Approx(1.0 / pi));
  }
  SUBCASE("zero vorticity") {
    DiskVorticity v = single_vortex({0.2, 0.1}, 0.0);
    CHECK(velocity_disk(id, v, {0.5, 0.0}) == Vec2{0.0, 0.0});
    DiskVorticity empty;
    CHECK(velocity_disk(ConformalMap(make_sector(pi / 2)), empty, {0.3, 0.3}) == Vec2{0.0, 0.0});
  }
  SUBCASE("property: tangent on the circle for any map") {
    for (const DomainSpec& d : {make_unit_disk(), make_half_disk(), make_sector(pi / 2)}) {
      const ConformalMap m(d);
      const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{m.inverse({0.2, 0.1}), 0.05}, 1.0}, 24);
      for (int k = 0; k < 64; ++k) {
        const Vec2 y = polar(1.0, 2.0 * pi * (k + 0.3) / 64.0);
        CHECK(std::abs(dot(velocity_disk(m, v, y), y)) <= 1e-10);
      }
    }
  }
  SUBCASE("batched equals pointwise") {
    const ConformalMap m(make_sector(pi / 2));
    const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 16);
    std::vector<double> yx, yy;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 37; ++i) {
      const Vec2 y = random_in_disk(rng);
      yx.push_back(y.x);
      yy.push_back(y.y);
    }
    std::vector<double> ux(yx.size()), uy(yx.size());
    velocity_disk(m, v, yx, yy, ux, uy);
    for (std::size_t i = 0; i < yx.size(); ++i) {
      const Vec2 p = velocity_disk(m, v, {yx[i], yy[i]});
      CHECK(p.x == ux[i]);
      CHECK(p.y == uy[i]);
    }
  }
}

TEST_CASE("velocity_physical") {
  SUBCASE("identity map equals velocity_disk") {
    const ConformalMap id(make_unit_disk());
    const DiskVorticity v = from_physical_patch(id, Patch{CirclePatch{{0.1, 0.0}, 0.3}, 2.0}, 16);
    for (Vec2 x : sample_interior(id.domain(), 50, 3)) {
      const Vec2 a = velocity_physical(id, v, x), b = velocity_disk(id, v, x);
      CHECK(norm(a - b) <= 1e-15 * (1.0 + norm(b)));
    }
  }
  SUBCASE("DT u = U at T(x)") {
    const ConformalMap m(make_sector(pi / 2));
    const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 16);
    const auto xs = sample_interior(m.domain(), 200, 12);
    const auto us = velocity_physical(m, v, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const MapEval e = m.forward(xs[i]);
      const Complex pushed = e.first_derivative * us[i].complex();
      const Vec2 big_u = velocity_disk(m, v, Vec2(e.value));
      CHECK(norm(Vec2(pushed) - big_u) <= 1e-9 * (1e-12 + norm(big_u)));
      CHECK(norm(velocity_physical(m, v, xs[i]) - us[i]) == 0.0);
    }
  }
  SUBCASE("zero at corner vertices") {
    const ConformalMap m(make_sector(pi / 2));
    const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 16);
    for (const Corner& c : m.domain().corners) CHECK(velocity_physical(m, v, c.vertex) == Vec2{0.0, 0.0});
  }
}
