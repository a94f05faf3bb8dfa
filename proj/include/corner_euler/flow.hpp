#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corner_euler/conformal.hpp"
#include "corner_euler/vorticity.hpp"

namespace corner_euler {

enum class Stepper { rk4, adaptive };

std::string to_string(Stepper s);
Stepper stepper_from_string(const std::string& name);

struct FlowConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Stepper stepper = Stepper::rk4;
  double tolerance = 1e-8;        // adaptive mode: local error target
  std::size_t record_every = 1;   // output stride in accepted (base) steps
  bool record_particles = true;   // store full particle trajectories
};

/// Throws std::invalid_argument naming the offending field.
void validate(const FlowConfig& cfg);

enum class PointKind { tracer, particle };

/// Samples of one Lagrangian path. Disk positions are integrated; physical
/// positions are T^{-1} of them.
struct Trajectory {
  std::size_t id = 0;
  PointKind kind = PointKind::tracer;
  std::vector<double> times;
  std::vector<Vec2> disk_positions;
  std::vector<Vec2> physical_positions;
};

struct AdvectResult {
  std::vector<Trajectory> tracers;
  std::vector<Trajectory> particles;  // empty unless cfg.record_particles
  DiskVorticity final_vorticity;
  std::vector<Vec2> final_tracers;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;  // boundary overshoot or error-control rejections
};

/// Raised when a step would need dt < 1e-12 to stay inside the disk.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(const std::string& what, PointKind kind, std::size_t index)
      : std::runtime_error(what), kind_(kind), index_(index) {}
  PointKind kind() const { return kind_; }
  std::size_t index() const { return index_; }

 private:
  PointKind kind_;
  std::size_t index_;
};

/// Integrates particles and passive tracers in disk coordinates under the
/// self-consistent pushed field U. Weights are untouched. A step that would
/// put any point on or outside the unit circle is retried as two half steps.
AdvectResult advect(const ConformalMap& map, const DiskVorticity& vort,
                    std::span<const Vec2> tracers, const FlowConfig& cfg);

/// min over samples of 1 - |Y(t)|.
double boundary_margin(const Trajectory& traj);

/// h(r) = r (1 + |ln r|), h(0) = 0.
double loglip_modulus(double r);

/// Region of the disk bounded by closed polygons, even-odd rule.
struct DiskRegion {
  std::vector<std::vector<Vec2>> rings;
};

DiskRegion disk_region_circle(Vec2 centre, double radius, std::size_t points);
DiskRegion disk_region_annulus(Vec2 centre, double inner, double outer, std::size_t points);
bool region_contains(const DiskRegion& region, Vec2 z);

struct MeasureCheck {
  double area_initial = 0.0;   // physical area of T^{-1}(region)
  double area_final = 0.0;     // physical area of T^{-1}(advected region)
  double relative_drift = 0.0;
  std::size_t n_mc = 0;
};

/// Advects the region boundary as tracers with the vortex particles and
/// compares physical areas before and after. Areas are Monte Carlo
/// estimates from n_mc points drawn uniformly in the physical domain and
/// pushed to the disk (a common sample for both times). Throws for
/// n_mc < 1000 or a region leaving the disk.
MeasureCheck measure_check(const ConformalMap& map, const DiskVorticity& vort,
                           const DiskRegion& region, std::size_t n_mc, const FlowConfig& cfg,
                           std::uint64_t seed = 1);

}  // namespace corner_euler
