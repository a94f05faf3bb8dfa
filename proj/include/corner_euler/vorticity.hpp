#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corner_euler/conformal.hpp"
#include "corner_euler/domain.hpp"
#include "corner_euler/simd/kernels.hpp"
#include "corner_euler/vec2.hpp"

namespace corner_euler {

struct CirclePatch {
  Vec2 center;
  double radius = 0.0;
};

/// Axis-aligned rectangle, intersected with the domain.
struct RectanglePatch {
  Vec2 lo;
  Vec2 hi;
};

/// Constant vorticity `value` on a physical region.
struct Patch {
  std::variant<CirclePatch, RectanglePatch> shape;
  double value = 0.0;
};

bool patch_contains(const Patch& patch, const DomainSpec& domain, Vec2 x);

struct VorticityMeta {
  std::string source;        // "patch", "single_vortex", "union", ...
  double resolution = 0.0;   // disk cells per unit length, 0 for point data
  double sigma = 0.0;        // blob radius
};

/// Discrete vorticity carried by particles in disk coordinates. Weights are
/// circulations: physical vorticity times the physical area each particle
/// stands for. Weights never change once built; positions belong to the
/// flow integrator.
struct DiskVorticity {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  /// Sup norm of the represented physical field; empty for point data.
  std::optional<double> sup_norm_physical;
  VorticityMeta meta;

  std::size_t size() const { return w.size(); }
  Vec2 position(std::size_t i) const { return {x[i], y[i]}; }
  double blob_radius() const { return meta.sigma; }

  simd::Sources sources() const { return {x, y, w}; }
};

/// Meshes T(patch) with disk cells of side 1/resolution, each split into
/// subdivisions^2 sub-cells. A particle sits at the mean of the covered
/// sub-cell centres and carries value * physical area of the covered
/// sub-cells, the latter from shoelace areas of inverse-mapped corners.
/// Throws std::invalid_argument for resolution < 8, a circle patch leaving
/// the domain, or an empty intersection.
DiskVorticity from_physical_patch(const ConformalMap& map, const Patch& patch, double resolution,
                                  int subdivisions = 4);

/// One point vortex; sup_norm_physical is left empty.
DiskVorticity single_vortex(Vec2 position, double circulation);

/// Concatenation of particle sets. The sup norm is the larger of the two
/// (exact for disjoint supports); the blob radius is the larger of the two.
DiskVorticity merge(const DiskVorticity& a, const DiskVorticity& b);

double total_circulation(const DiskVorticity& vort);

/// Copy with every weight multiplied by `factor` (time reversal uses -1).
DiskVorticity scaled(const DiskVorticity& vort, double factor);

}  // namespace corner_euler
