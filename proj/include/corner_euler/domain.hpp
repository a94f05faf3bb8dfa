#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "corner_euler/vec2.hpp"

namespace corner_euler {

enum class DomainKind { unit_disk, half_disk, sector };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

/// Boundary corner of interior angle theta in (0, pi/2].
struct Corner {
  Vec2 vertex;
  double theta = 0.0;
  /// 1 - theta/pi, in [1/2, 1).
  double alpha = 0.0;
  /// Image of the vertex on the unit circle under the Riemann map.
  Vec2 disk_image;
  /// Unit vector bisecting the corner, pointing into the domain.
  Vec2 bisector;
};

Corner make_corner(Vec2 vertex, double theta, Vec2 disk_image, Vec2 bisector);

/// One of the closed-form model domains. The sector has unit radius, its
/// vertex at the origin and one edge on the positive real axis.
struct DomainSpec {
  DomainKind kind = DomainKind::unit_disk;
  double theta0 = 0.0;  // sector opening; unused otherwise
  std::vector<Corner> corners;
  double delta = 0.0;   // corner-neighbourhood radius; 0 for the unit disk
};

DomainSpec make_unit_disk();
DomainSpec make_half_disk(double delta = 0.0);
DomainSpec make_sector(double theta0, double delta = 0.0);

/// Minimum pairwise distance between corner vertices and between their disk
/// images. Infinite for fewer than two corners.
double min_corner_separation(const DomainSpec& domain);

/// Throws std::invalid_argument naming the offending field.
void validate(const DomainSpec& domain);

/// Strict interior test, evaluated analytically per domain kind.
bool contains(const DomainSpec& domain, Vec2 x);

/// Area of the domain (closed form).
double area(const DomainSpec& domain);

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
};
BoundingBox bounding_box(const DomainSpec& domain);

/// n interior points by rejection from the bounding box. Deterministic in
/// seed. Throws std::runtime_error when fewer than 1% of draws are accepted.
std::vector<Vec2> sample_interior(const DomainSpec& domain, std::size_t n, std::uint64_t seed);

struct NearestCorner {
  const Corner* corner = nullptr;
  std::size_t index = 0;
  double distance = 0.0;
};

/// Closest corner vertex; ties go to the earlier corner in the list.
/// Throws std::invalid_argument for a domain without corners.
NearestCorner nearest_corner(const DomainSpec& domain, Vec2 x);

}  // namespace corner_euler
