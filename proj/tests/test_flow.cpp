#include <cmath>
#include <numbers>
#include <vector>

#include "corner_euler/biot_savart.hpp"
#include "corner_euler/flow.hpp"
#include "doctest.h"

using namespace corner_euler;
using std::numbers::pi;

namespace {

// Time at which the unwrapped polar angle of a trajectory first reaches
// 2pi, by linear interpolation between records. Negative if never.
double first_period(const Trajectory& t) {
  double acc = 0.0;
  double prev = std::atan2(t.disk_positions[0].y, t.disk_positions[0].x);
  for (std::size_t j = 1; j < t.times.size(); ++j) {
    const double a = std::atan2(t.disk_positions[j].y, t.disk_positions[j].x);
    double da = a - prev;
    if (da < -pi) da += 2.0 * pi;
    if (da > pi) da -= 2.0 * pi;
    if (acc + da >= 2.0 * pi) {
      return t.times[j - 1] + (2.0 * pi - acc) / da * (t.times[j] - t.times[j - 1]);
    }
    acc += da;
    prev = a;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("circular orbit around a central vortex") {
  // Speed 1/(2 pi rho) at radius rho, so the period is 4 pi^2 rho^2.
  const ConformalMap id(make_unit_disk());
  const std::vector<Vec2> tracer{{0.5, 0.0}};
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.02 * pi * pi;
  const AdvectResult r = advect(id, single_vortex({0.0, 0.0}, 1.0), tracer, cfg);
  const Trajectory& t = r.tracers.at(0);
  double drift = 0.0;
  for (Vec2 y : t.disk_positions) drift = std::max(drift, std::abs(norm(y) - 0.5));
  CHECK(drift <= 1e-6);
  CHECK(first_period(t) == doctest::Approx(pi * pi).epsilon(1e-4));
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(cfg.t_end).epsilon(1e-14));
  CHECK(r.rejected_steps == 0);
}

TEST_CASE("angular velocity at several radii") {
  const ConformalMap id(make_unit_disk());
  const std::vector<Vec2> tracers{{0.2, 0.0}, {0.0, 0.7}, {-0.9, 0.0}};
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  const AdvectResult r = advect(id, single_vortex({0.0, 0.0}, 1.0), tracers, cfg);
  for (std::size_t i = 0; i < tracers.size(); ++i) {
    const double rho = norm(tracers[i]);
    const double expected = std::atan2(tracers[i].y, tracers[i].x) + cfg.t_end / (2.0 * pi * rho * rho);
    const Vec2 oracle = polar(rho, expected);
    CHECK(norm(r.final_tracers[i] - oracle) <= 1e-8);
  }
}

TEST_CASE("RK4 error falls by about 16 per halving") {
  const ConformalMap id(make_unit_disk());
  const DiskVorticity v = single_vortex({0.0, 0.0}, 1.0);
  auto end = [&](double dt) {
    FlowConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    const std::vector<Vec2> tr{{0.5, 0.0}};
    return advect(id, v, tr, cfg).final_tracers[0];
  };
  const Vec2 exact = polar(0.5, 2.0 * 2.0 / pi);
  const double e1 = norm(end(0.2) - exact), e2 = norm(end(0.1) - exact);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("zero vorticity leaves everything in place") {
  const ConformalMap m(make_sector(pi / 2));
  const DiskVorticity v = single_vortex({0.3, 0.1}, 0.0);
  const std::vector<Vec2> tr{{0.1, 0.2}, {-0.5, 0.5}};
  FlowConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 1.0;
  const AdvectResult r = advect(m, v, tr, cfg);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (Vec2 y : r.tracers[i].disk_positions) CHECK(y == tr[i]);
    CHECK(boundary_margin(r.tracers[i]) == doctest::Approx(1.0 - norm(tr[i])));
  }
  CHECK(r.final_vorticity.position(0) == Vec2{0.3, 0.1});
}

TEST_CASE("self-consistent patch advection on sector(pi/2)") {
  const ConformalMap m(make_sector(pi / 2));
  const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 12);
  const std::vector<Vec2> tr{{0.0, 0.0}, {0.9, 0.0}, polar(0.99, 2.5)};
  FlowConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.record_every = 10;
  const AdvectResult r = advect(m, v, tr, cfg);

  SUBCASE("weights untouched") {
    CHECK(r.final_vorticity.w == v.w);
    CHECK(total_circulation(r.final_vorticity) == total_circulation(v));
  }
  SUBCASE("records stay inside the disk and match the inverse map") {
    REQUIRE(r.particles.size() == v.size());
    for (const auto* list : {&r.tracers, &r.particles}) {
      for (const Trajectory& t : *list) {
        CHECK(t.times.size() == 11);
        CHECK(boundary_margin(t) > 0.0);
        for (std::size_t j = 0; j < t.times.size(); ++j) {
          CHECK(norm(t.disk_positions[j]) < 1.0);
          CHECK(norm(t.physical_positions[j] - m.inverse(t.disk_positions[j])) <= 1e-9);
        }
      }
    }
    CHECK(r.tracers[1].kind == PointKind::tracer);
    CHECK(r.particles[0].kind == PointKind::particle);
  }
  SUBCASE("particles actually move") {
    double moved = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) moved = std::max(moved, norm(r.final_vorticity.position(i) - v.position(i)));
    CHECK(moved > 1e-3);
  }
}

TEST_CASE("time reversal with negated weights") {
  const ConformalMap m(make_sector(pi / 2));
  const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 12);
  const std::vector<Vec2> tr{{0.2, -0.3}, {0.0, 0.8}};
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.record_every = 1000;
  cfg.record_particles = false;
  const AdvectResult fwd = advect(m, v, tr, cfg);
  const DiskVorticity back_start = scaled(fwd.final_vorticity, -1.0);
  const AdvectResult back = advect(m, back_start, fwd.final_tracers, cfg);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(norm(back.final_vorticity.position(i) - v.position(i)) <= 1e-5);
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(norm(back.final_tracers[i] - tr[i]) <= 1e-5);
}

TEST_CASE("adaptive stepper on the orbit fixture") {
  const ConformalMap id(make_unit_disk());
  FlowConfig cfg;
  cfg.stepper = Stepper::adaptive;
  cfg.dt = 0.1;
  cfg.tolerance = 1e-10;
  cfg.t_end = 2.0;
  const std::vector<Vec2> tr{{0.5, 0.0}};
  const AdvectResult r = advect(id, single_vortex({0.0, 0.0}, 1.0), tr, cfg);
  CHECK(norm(r.final_tracers[0] - polar(0.5, 4.0 / pi)) <= 1e-7);
  CHECK(r.tracers[0].times.back() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("step underflow names the offender") {
  // A huge circulation next to the circle forces steps below 1e-12 for a
  // tracer sitting one ulp inside.
  const ConformalMap id(make_unit_disk());
  const std::vector<Vec2> tr{{std::nextafter(1.0, 0.0), 0.0}};
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-3;
  try {
    advect(id, single_vortex({0.99, 0.0}, 1e9), tr, cfg);
    FAIL("expected StepUnderflow");
  } catch (const StepUnderflow& e) {
    const std::string what = e.what();
    CHECK(what.find(e.kind() == PointKind::tracer ? "tracer" : "particle") != std::string::npos);
    CHECK(e.index() == 0);
  }
}

TEST_CASE("flow config validation") {
  FlowConfig c;
  CHECK_NOTHROW(validate(c));
  c.dt = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("flow.dt"), std::invalid_argument);
  c = FlowConfig{};
  c.t_end = -1.0;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("flow.t_end"), std::invalid_argument);
  c = FlowConfig{};
  c.tolerance = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("flow.tolerance"), std::invalid_argument);
  c = FlowConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);

  const std::vector<Vec2> outside{{1.0, 0.0}};
  CHECK_THROWS_AS(advect(ConformalMap(make_unit_disk()), single_vortex({0, 0}, 1.0), outside, FlowConfig{}),
                  std::invalid_argument);

  CHECK(stepper_from_string(to_string(Stepper::rk4)) == Stepper::rk4);
  CHECK(stepper_from_string(to_string(Stepper::adaptive)) == Stepper::adaptive);
  CHECK_THROWS_AS(stepper_from_string("euler"), std::invalid_argument);
}

TEST_CASE("loglip_modulus") {
  CHECK(loglip_modulus(0.0) == 0.0);
  CHECK(loglip_modulus(1.0) == 1.0);
  CHECK(loglip_modulus(0.1) == doctest::Approx(0.33026).epsilon(1e-5));
  CHECK(loglip_modulus(std::exp(1.0)) == doctest::Approx(2.0 * std::exp(1.0)));
  // Monotone increasing on [0, 1].
  double prev = 0.0;
  for (double r = 1e-8; r <= 1.0; r *= 1.5) {
    CHECK(loglip_modulus(r) > prev);
    prev = loglip_modulus(r);
  }
}

TEST_CASE("disk regions") {
  const DiskRegion c = disk_region_circle({0.1, 0.0}, 0.3, 256);
  CHECK(region_contains(c, {0.1, 0.0}));
  CHECK(region_contains(c, {0.35, 0.0}));
  CHECK_FALSE(region_contains(c, {0.45, 0.0}));
  const DiskRegion a = disk_region_annulus({0.0, 0.0}, 0.2, 0.5, 256);
  CHECK_FALSE(region_contains(a, {0.0, 0.0}));
  CHECK(region_contains(a, {0.3, 0.1}));
  CHECK_FALSE(region_contains(a, {0.0, 0.6}));
}

TEST_CASE("measure_check") {
  FlowConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  SUBCASE("zero vorticity") {
    const ConformalMap m(make_sector(pi / 2));
    const MeasureCheck mc = measure_check(m, single_vortex({0.1, 0.1}, 0.0), disk_region_circle({0.1, 0.2}, 0.3, 128),
                                          10000, cfg);
    CHECK(mc.relative_drift == 0.0);
    CHECK(mc.n_mc == 10000);
    CHECK(mc.area_initial > 0.0);
  }
  SUBCASE("rotation about the centre preserves area") {
    const ConformalMap id(make_unit_disk());
    const MeasureCheck mc = measure_check(id, single_vortex({0.0, 0.0}, 1.0),
                                          disk_region_annulus({0.1, 0.0}, 0.2, 0.6, 512), 100000, cfg);
    CHECK(mc.relative_drift <= 0.01);
    // Annulus area pi (0.36 - 0.04), estimated from 1e5 points.
    CHECK(mc.area_initial == doctest::Approx(pi * 0.32).epsilon(0.02));
  }
  SUBCASE("rejects small samples") {
    const ConformalMap id(make_unit_disk());
    CHECK_THROWS_AS(measure_check(id, single_vortex({0, 0}, 1.0), disk_region_circle({0, 0}, 0.5, 64), 999, cfg),
                    std::invalid_argument);
  }
}
