#include "corner_euler/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace corner_euler {

GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto un = static_cast<unsigned>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(un, x);
      const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
      dp = static_cast<double>(n) * (x * p - pm) / (x * x - 1.0);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    {
      const double p = std::legendre(un, x);
      const double pm = n > 1 ? std::legendre(un - 1, x) : 1.0;
      dp = static_cast<double>(n) * (x * p - pm) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

// Distance from y along the unit direction e to the unit circle.
double ray_to_circle(Vec2 y, Vec2 e) {
  const double b = dot(y, e);
  return -b + std::sqrt(b * b + 1.0 - norm2(y));
}

// Integral of chi_c(z) |K(., z) differences| over D in polar coordinates
// about `c`, where `o` is the other point.
double polar_piece(simd::Backend backend, Vec2 c, Vec2 o, Vec2 y1, Vec2 y2, KernelSlot slot,
                   std::size_t angles, const GaussRule& rule) {
  const double d = norm(y1 - y2);
  const std::size_t q = rule.nodes.size();
  std::vector<double> zx, zy, wt, ax, ay, bx, by, k1x, k1y, k2x, k2y;
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angles);
  double total = 0.0;
  for (std::size_t a = 0; a < angles; ++a) {
    const Vec2 e = polar(1.0, (static_cast<double>(a) + 0.5) * dtheta);
    const double r_max = ray_to_circle(c, e);
    zx.clear();
    zy.clear();
    wt.clear();
    double lo = 0.0;
    double hi = d / 8.0;
    while (lo < r_max) {
      hi = std::min(hi, r_max);
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      for (std::size_t k = 0; k < q; ++k) {
        const double rho = mid + half * rule.nodes[k];
        const Vec2 z = c + rho * e;
        zx.push_back(z.x);
        zy.push_back(z.y);
        wt.push_back(half * rule.weights[k] * rho);
      }
      lo = hi;
      hi = 2.0 * hi;
    }
    const std::size_t m = zx.size();
    k1x.resize(m);
    k1y.resize(m);
    k2x.resize(m);
    k2y.resize(m);
    ax.assign(m, y1.x);
    ay.assign(m, y1.y);
    bx.assign(m, y2.x);
    by.assign(m, y2.y);
    if (slot == KernelSlot::first) {
      simd::kernel_disk_elementwise(backend, ax, ay, zx, zy, k1x, k1y);
      simd::kernel_disk_elementwise(backend, bx, by, zx, zy, k2x, k2y);
    } else {
      simd::kernel_disk_elementwise(backend, zx, zy, ax, ay, k1x, k1y);
      simd::kernel_disk_elementwise(backend, zx, zy, bx, by, k2x, k2y);
    }
    double ray = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 z{zx[k], zy[k]};
      const double dc = norm(z - c);
      const double dother = norm(z - o);
      const double chi = dother / (dc + dother);
      ray += wt[k] * chi * std::hypot(k1x[k] - k2x[k], k1y[k] - k2y[k]);
    }
    total += ray;
  }
  return total * dtheta;
}

}  // namespace

double k3_integral(Vec2 y1, Vec2 y2, KernelSlot slot, std::size_t resolution) {
  return k3_integral(simd::active_backend(), y1, y2, slot, resolution);
}

double k3_integral(simd::Backend backend, Vec2 y1, Vec2 y2, KernelSlot slot,
                   std::size_t resolution) {
  if (!(norm2(y1) < 1.0) || !(norm2(y2) < 1.0)) {
    throw std::invalid_argument("k3_integral: points must lie inside the unit disk");
  }
  if (resolution < 16) throw std::invalid_argument("k3_integral: resolution must be at least 16");
  if (y1 == y2) return 0.0;
  const GaussRule rule = gauss_legendre(std::max<std::size_t>(8, resolution / 32));
  const double value = polar_piece(backend, y1, y2, y1, y2, slot, resolution, rule) +
                       polar_piece(backend, y2, y1, y1, y2, slot, resolution, rule);
  if (!std::isfinite(value)) {
    throw std::runtime_error("k3_integral: quadrature produced a non-finite value");
  }
  return value;
}

}  // namespace corner_euler
