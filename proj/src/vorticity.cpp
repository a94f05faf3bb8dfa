#include "corner_euler/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corner_euler {

namespace {

double quad_area(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  return 0.5 * std::abs(cross(a, b) + cross(b, c) + cross(c, d) + cross(d, a));
}

std::string describe(const Patch& patch) {
  if (const auto* c = std::get_if<CirclePatch>(&patch.shape)) {
    return "circle(" + std::to_string(c->center.x) + "," + std::to_string(c->center.y) + ";r=" +
           std::to_string(c->radius) + ")";
  }
  const auto& r = std::get<RectanglePatch>(patch.shape);
  return "rectangle(" + std::to_string(r.lo.x) + "," + std::to_string(r.lo.y) + ";" +
         std::to_string(r.hi.x) + "," + std::to_string(r.hi.y) + ")";
}

}  // namespace

bool patch_contains(const Patch& patch, const DomainSpec& domain, Vec2 x) {
  if (!contains(domain, x)) return false;
  if (const auto* c = std::get_if<CirclePatch>(&patch.shape)) {
    return norm2(x - c->center) < c->radius * c->radius;
  }
  const auto& r = std::get<RectanglePatch>(patch.shape);
  return x.x > r.lo.x && x.x < r.hi.x && x.y > r.lo.y && x.y < r.hi.y;
}

DiskVorticity from_physical_patch(const ConformalMap& map, const Patch& patch, double resolution,
                                  int subdivisions) {
  if (!(resolution >= 8.0)) {
    throw std::invalid_argument("vorticity.resolution: must be at least 8");
  }
  if (subdivisions < 1) throw std::invalid_argument("vorticity: subdivisions must be positive");
  const DomainSpec& domain = map.domain();

  if (const auto* c = std::get_if<CirclePatch>(&patch.shape)) {
    if (!(c->radius > 0.0)) throw std::invalid_argument("vorticity.patch.radius: must be positive");
    constexpr int kProbe = 512;
    for (int k = 0; k < kProbe; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / kProbe;
      if (!contains(domain, c->center + polar(c->radius, phi))) {
        throw std::invalid_argument("vorticity.patch: circle not contained in the domain");
      }
    }
  } else {
    const auto& r = std::get<RectanglePatch>(patch.shape);
    if (!(r.hi.x > r.lo.x && r.hi.y > r.lo.y)) {
      throw std::invalid_argument("vorticity.patch: rectangle corners out of order");
    }
  }

  const int cells = static_cast<int>(std::ceil(2.0 * resolution));
  const double h = 2.0 / cells;
  const int s = subdivisions;
  const int nv = cells * s + 1;
  const double hs = h / s;

  // Preimages of the sub-grid vertices; vertices outside the disk are pulled
  // radially onto the circle so boundary sub-cells keep a sensible shape.
  std::vector<Vec2> pre(static_cast<std::size_t>(nv) * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nv; ++i) {
      Vec2 z{-1.0 + i * hs, -1.0 + j * hs};
      const double r = norm(z);
      if (r > 1.0) z = z / r;
      pre[static_cast<std::size_t>(j) * nv + i] = map.inverse(z);
    }
  }
  auto vertex = [&](int i, int j) { return pre[static_cast<std::size_t>(j) * nv + i]; };

  DiskVorticity out;
  for (int cj = 0; cj < cells; ++cj) {
    for (int ci = 0; ci < cells; ++ci) {
      double area = 0.0;
      Vec2 centre_sum{};
      int covered = 0;
      for (int sj = 0; sj < s; ++sj) {
        for (int si = 0; si < s; ++si) {
          const int i = ci * s + si;
          const int j = cj * s + sj;
          const Vec2 centre{-1.0 + (i + 0.5) * hs, -1.0 + (j + 0.5) * hs};
          if (!(norm2(centre) < 1.0)) continue;
          const Vec2 a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1),
                     d = vertex(i, j + 1);
          const Vec2 probe = 0.25 * (a + b + c + d);
          if (!patch_contains(patch, domain, probe)) continue;
          area += quad_area(a, b, c, d);
          centre_sum += centre;
          ++covered;
        }
      }
      if (covered == 0) continue;
      const Vec2 z = centre_sum / static_cast<double>(covered);
      out.x.push_back(z.x);
      out.y.push_back(z.y);
      out.w.push_back(patch.value * area);
    }
  }
  if (out.size() == 0) {
    throw std::invalid_argument("vorticity.patch: does not intersect the domain at this resolution");
  }
  out.sup_norm_physical = std::abs(patch.value);
  out.meta = {"patch:" + describe(patch), resolution, 0.5 * h};
  return out;
}

DiskVorticity single_vortex(Vec2 position, double circulation) {
  if (!(norm2(position) < 1.0)) {
    throw std::invalid_argument("vorticity.position: point vortex must lie inside the unit disk");
  }
  DiskVorticity out;
  out.x = {position.x};
  out.y = {position.y};
  out.w = {circulation};
  out.meta = {"single_vortex", 0.0, 0.0};
  return out;
}

DiskVorticity merge(const DiskVorticity& a, const DiskVorticity& b) {
  DiskVorticity out = a;
  out.x.insert(out.x.end(), b.x.begin(), b.x.end());
  out.y.insert(out.y.end(), b.y.begin(), b.y.end());
  out.w.insert(out.w.end(), b.w.begin(), b.w.end());
  if (a.sup_norm_physical && b.sup_norm_physical) {
    out.sup_norm_physical = std::max(*a.sup_norm_physical, *b.sup_norm_physical);
  } else {
    out.sup_norm_physical = a.sup_norm_physical ? a.sup_norm_physical : b.sup_norm_physical;
  }
  out.meta.source = a.meta.source + "+" + b.meta.source;
  out.meta.resolution = std::max(a.meta.resolution, b.meta.resolution);
  out.meta.sigma = std::max(a.meta.sigma, b.meta.sigma);
  return out;
}

double total_circulation(const DiskVorticity& vort) {
  double sum = 0.0;
  for (double w : vort.w) sum += w;
  return sum;
}

DiskVorticity scaled(const DiskVorticity& vort, double factor) {
  DiskVorticity out = vort;
  for (double& w : out.w) w *= factor;
  if (out.sup_norm_physical) *out.sup_norm_physical *= std::abs(factor);
  return out;
}

}  // namespace corner_euler
