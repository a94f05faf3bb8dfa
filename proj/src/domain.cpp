#include "corner_euler/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace corner_euler {

namespace {

constexpr double kPi = std::numbers::pi;

double default_delta(const DomainSpec& d) { return 0.2 * min_corner_separation(d); }

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::unit_disk: return "unit_disk";
    case DomainKind::half_disk: return "half_disk";
    case DomainKind::sector: return "sector";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "unit_disk") return DomainKind::unit_disk;
  if (name == "half_disk") return DomainKind::half_disk;
  if (name == "sector") return DomainKind::sector;
  throw std::invalid_argument("domain.kind: unknown domain kind '" + name + "'");
}

Corner make_corner(Vec2 vertex, double theta, Vec2 disk_image, Vec2 bisector) {
  if (!(theta > 0.0 && theta <= kPi / 2)) {
    throw std::invalid_argument("corner angle must lie in (0, pi/2]");
  }
  Corner c;
  c.vertex = vertex;
  c.theta = theta;
  c.alpha = 1.0 - theta / kPi;
  c.disk_image = disk_image / norm(disk_image);
  c.bisector = bisector / norm(bisector);
  return c;
}

DomainSpec make_unit_disk() { return DomainSpec{}; }

DomainSpec make_half_disk(double delta) {
  DomainSpec d;
  d.kind = DomainKind::half_disk;
  // Diameter meets the arc at right angles at both ends.
  d.corners.push_back(make_corner({1.0, 0.0}, kPi / 2, {0.0, 1.0}, {-1.0, 1.0}));
  d.corners.push_back(make_corner({-1.0, 0.0}, kPi / 2, {0.0, -1.0}, {1.0, 1.0}));
  d.delta = delta > 0.0 ? delta : default_delta(d);
  validate(d);
  return d;
}

DomainSpec make_sector(double theta0, double delta) {
  if (!(theta0 > 0.0 && theta0 <= kPi / 2 + 1e-12)) {
    throw std::invalid_argument("domain.theta0: sector angle must lie in (0, pi/2], got " +
                                std::to_string(theta0));
  }
  theta0 = std::min(theta0, kPi / 2);
  DomainSpec d;
  d.kind = DomainKind::sector;
  d.theta0 = theta0;
  const Vec2 tip = polar(1.0, theta0);
  d.corners.push_back(make_corner({0.0, 0.0}, theta0, {1.0, 0.0}, polar(1.0, theta0 / 2)));
  // Arc corners: radial edge against the arc, always a right angle.
  d.corners.push_back(make_corner({1.0, 0.0}, kPi / 2, {0.0, 1.0}, {-1.0, 1.0}));
  const Vec2 inward = -tip;
  const Vec2 along_arc = {tip.y, -tip.x};  // clockwise tangent at the tip
  d.corners.push_back(make_corner(tip, kPi / 2, {0.0, -1.0}, inward + along_arc));
  d.delta = delta > 0.0 ? delta : default_delta(d);
  validate(d);
  return d;
}

double min_corner_separation(const DomainSpec& domain) {
  double best = std::numeric_limits<double>::infinity();
  const auto& cs = domain.corners;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      best = std::min(best, norm(cs[i].vertex - cs[j].vertex));
      best = std::min(best, norm(cs[i].disk_image - cs[j].disk_image));
    }
  }
  return best;
}

void validate(const DomainSpec& domain) {
  if (domain.kind == DomainKind::sector &&
      !(domain.theta0 > 0.0 && domain.theta0 <= kPi / 2)) {
    throw std::invalid_argument("domain.theta0: sector angle must lie in (0, pi/2]");
  }
  for (const auto& c : domain.corners) {
    if (std::abs(c.alpha - (1.0 - c.theta / kPi)) > 0.0) {
      throw std::invalid_argument("domain.corners: alpha inconsistent with theta");
    }
    if (std::abs(norm(c.disk_image) - 1.0) > 1e-12) {
      throw std::invalid_argument("domain.corners: disk image off the unit circle");
    }
  }
  if (domain.corners.empty()) return;
  if (!(domain.delta > 0.0)) {
    throw std::invalid_argument("domain.delta: must be positive");
  }
  if (!(domain.delta < min_corner_separation(domain) / 3.0)) {
    throw std::invalid_argument("domain.delta: must be below a third of the minimum corner separation");
  }
}

bool contains(const DomainSpec& domain, Vec2 x) {
  const double r2 = norm2(x);
  if (!(r2 < 1.0)) return false;
  switch (domain.kind) {
    case DomainKind::unit_disk:
      return true;
    case DomainKind::half_disk:
      return x.y > 0.0;
    case DomainKind::sector: {
      if (r2 == 0.0) return false;
      // Strictly between the edge on the real axis and the edge at theta0.
      const Vec2 tip = polar(1.0, domain.theta0);
      return x.y > 0.0 && cross(tip, x) < 0.0;
    }
  }
  return false;
}

double area(const DomainSpec& domain) {
  switch (domain.kind) {
    case DomainKind::unit_disk: return kPi;
    case DomainKind::half_disk: return kPi / 2;
    case DomainKind::sector: return domain.theta0 / 2;
  }
  return 0.0;
}

BoundingBox bounding_box(const DomainSpec& domain) {
  switch (domain.kind) {
    case DomainKind::unit_disk: return {{-1.0, -1.0}, {1.0, 1.0}};
    case DomainKind::half_disk: return {{-1.0, 0.0}, {1.0, 1.0}};
    case DomainKind::sector: return {{0.0, 0.0}, {1.0, std::sin(domain.theta0)}};
  }
  return {};
}

std::vector<Vec2> sample_interior(const DomainSpec& domain, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_interior: n must be at least 1");
  const auto box = bounding_box(domain);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
  std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);

  std::vector<Vec2> out;
  out.reserve(n);
  const std::size_t max_draws = 100 * n + 1000;
  std::size_t draws = 0;
  while (out.size() < n) {
    if (draws++ >= max_draws) {
      throw std::runtime_error("sample_interior: acceptance rate below 1%, domain '" +
                               to_string(domain.kind) + "' looks malformed");
    }
    const Vec2 p{ux(rng), uy(rng)};
    if (contains(domain, p)) out.push_back(p);
  }
  return out;
}

NearestCorner nearest_corner(const DomainSpec& domain, Vec2 x) {
  if (domain.corners.empty()) {
    throw std::invalid_argument("nearest_corner: domain '" + to_string(domain.kind) +
                                "' has no corners");
  }
  NearestCorner best{&domain.corners[0], 0, norm(x - domain.corners[0].vertex)};
  for (std::size_t i = 1; i < domain.corners.size(); ++i) {
    const double dist = norm(x - domain.corners[i].vertex);
    if (dist < best.distance) best = {&domain.corners[i], i, dist};
  }
  return best;
}

}  // namespace corner_euler
