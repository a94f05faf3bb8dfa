#include "corner_euler/biot_savart.hpp"

#include <stdexcept>

#include "corner_euler/parallel.hpp"
#include "corner_euler/simd/kernels.hpp"
#include "corner_euler/simd/pair_kernel.hpp"

namespace corner_euler {

namespace {

Vec2 kernel_unchecked(Vec2 y, Vec2 z) {
  double fx, fy;
  simd::pair_field(y.x, y.y, z.x, z.y, 0.0, fx, fy);
  return {-simd::kInvTwoPi * fy, simd::kInvTwoPi * fx};
}

double sigma2_of(const DiskVorticity& vort) { return vort.meta.sigma * vort.meta.sigma; }

}  // namespace

Vec2 image_point(Vec2 z) {
  const double q = norm2(z);
  if (q == 0.0) throw std::invalid_argument("image_point: the origin has no image");
  return z / q;
}

Vec2 kernel_disk(Vec2 y, Vec2 z) {
  if (y == z) throw std::invalid_argument("kernel_disk: singular at y = z");
  return kernel_unchecked(y, z);
}

Vec2 kernel_difference(Vec2 y1, Vec2 y2, Vec2 z) {
  if (z == y1 || z == y2) throw std::invalid_argument("kernel_difference: z coincides with y1 or y2");
  if (y1 == y2) return {};
  return kernel_unchecked(y1, z) - kernel_unchecked(y2, z);
}

Vec2 disk_field(const DiskVorticity& vort, Vec2 y) {
  double ux = 0.0, uy = 0.0;
  simd::biot_savart_sum(std::span<const double>(&y.x, 1), std::span<const double>(&y.y, 1),
                        vort.sources(), sigma2_of(vort), std::span<double>(&ux, 1),
                        std::span<double>(&uy, 1));
  return {ux, uy};
}

Vec2 velocity_disk(const ConformalMap& map, const DiskVorticity& vort, Vec2 y) {
  return map.pushforward_factor(y) * disk_field(vort, y);
}

void velocity_disk(const ConformalMap& map, const DiskVorticity& vort, std::span<const double> yx,
                   std::span<const double> yy, std::span<double> ux, std::span<double> uy) {
  velocity_disk(map, vort.sources(), vort.meta.sigma, yx, yy, ux, uy);
}

void velocity_disk(const ConformalMap& map, simd::Sources src, double sigma,
                   std::span<const double> yx, std::span<const double> yy, std::span<double> ux,
                   std::span<double> uy) {
  const double s2 = sigma * sigma;
  parallel_for(yx.size(), [&](std::size_t b, std::size_t e) {
    const std::size_t n = e - b;
    simd::biot_savart_sum(yx.subspan(b, n), yy.subspan(b, n), src, s2, ux.subspan(b, n),
                          uy.subspan(b, n));
    if (map.is_identity()) return;
    for (std::size_t i = b; i < e; ++i) {
      const double g = map.pushforward_factor({yx[i], yy[i]});
      ux[i] *= g;
      uy[i] *= g;
    }
  });
}

Vec2 velocity_physical(const ConformalMap& map, const DiskVorticity& vort, Vec2 x) {
  const MapEval e = map.forward(x);
  if (!e.regular()) return {};
  const Vec2 v = disk_field(vort, Vec2(e.value));
  // DT^T v, i.e. conj(T') * v in complex form.
  return Vec2(std::conj(e.first_derivative) * v.complex());
}

std::vector<Vec2> velocity_physical(const ConformalMap& map, const DiskVorticity& vort,
                                    std::span<const Vec2> xs) {
  const std::size_t n = xs.size();
  std::vector<MapEval> evals(n);
  std::vector<double> yx(n), yy(n), vx(n), vy(n);
  for (std::size_t i = 0; i < n; ++i) {
    evals[i] = map.forward(xs[i]);
    yx[i] = evals[i].value.real();
    yy[i] = evals[i].value.imag();
  }
  const double s2 = sigma2_of(vort);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    const std::size_t m = e - b;
    simd::biot_savart_sum(std::span<const double>(yx).subspan(b, m),
                          std::span<const double>(yy).subspan(b, m), vort.sources(), s2,
                          std::span<double>(vx).subspan(b, m), std::span<double>(vy).subspan(b, m));
  });
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!evals[i].regular()) continue;
    out[i] = Vec2(std::conj(evals[i].first_derivative) * Complex(vx[i], vy[i]));
  }
  return out;
}

}  // namespace corner_euler
