#include "corner_euler/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "corner_euler/biot_savart.hpp"
#include "corner_euler/parallel.hpp"
#include "corner_euler/quadrature.hpp"
#include "corner_euler/simd/kernels.hpp"

namespace corner_euler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

// Uniform in the open unit disk, or (with probability `edge`) within a
// log-uniform distance in [1e-8, 1e-1] of the circle.
Vec2 disk_point(Rng& rng, double edge = 0.0) {
  const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  double r;
  if (edge > 0.0 && uniform(rng) < edge) {
    r = 1.0 - log_uniform(rng, 1e-8, 1e-1);
  } else {
    r = std::sqrt(uniform(rng));
  }
  return polar(r, phi);
}

FitReport ratio_report(std::string name, std::size_t n, double max_ratio, double threshold) {
  FitReport r;
  r.name = std::move(name);
  r.n_samples = n;
  r.max_ratio = max_ratio;
  r.fitted_constant = max_ratio;
  r.threshold = threshold;
  r.pass = std::isfinite(max_ratio) && max_ratio <= threshold;
  return r;
}

double slope_tolerance(double expected, double relative) {
  return expected == 0.0 ? relative : relative * std::abs(expected);
}

FitReport slope_report(std::string name, std::span<const double> radii,
                       std::span<const double> values, double expected, double relative) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    lx.push_back(std::log(radii[i]));
    ly.push_back(std::log(values[i]));
  }
  FitReport r;
  r.name = std::move(name);
  r.n_samples = radii.size();
  const bool finite = std::all_of(ly.begin(), ly.end(), [](double v) { return std::isfinite(v); });
  r.expected_slope = expected;
  r.threshold = slope_tolerance(expected, relative);
  if (!finite) {
    r.slope = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
    return r;
  }
  const LinearFit fit = linear_fit(lx, ly);
  r.slope = fit.slope;
  r.r_squared = fit.r_squared;
  r.fitted_constant = std::exp(fit.intercept);
  r.max_ratio = std::abs(fit.slope - expected);
  r.pass = r.max_ratio <= r.threshold;
  return r;
}

}  // namespace

FitReport check_tangency(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> yx(n), yy(n), zx(n), zy(n), kx(n), ky(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 y = polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const Vec2 z = disk_point(rng);
    yx[i] = y.x;
    yy[i] = y.y;
    zx[i] = z.x;
    zy[i] = z.y;
  }
  simd::kernel_disk_elementwise(yx, yy, zx, zy, kx, ky);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(kx[i] * yx[i] + ky[i] * yy[i]));
  return ratio_report("tangency", n, worst, 1e-13);
}

FitReport check_algebraic_identity(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  std::size_t used = 0;
  while (used < n) {
    const Vec2 a{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const Vec2 b{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    if (norm2(a) == 0.0 || norm2(b) == 0.0 || a == b) continue;
    const double lhs = norm(a / norm2(a) - b / norm2(b));
    const double rhs = norm(a - b) / (norm(a) * norm(b));
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    ++used;
  }
  return ratio_report("algebraic_identity", n, worst, 1e-12);
}

FitReport check_image_inequality(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 y = i % 4 == 0 ? polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi))
                              : disk_point(rng, 0.5);
    const Vec2 z = disk_point(rng, 0.5);
    if (norm2(z) == 0.0) continue;
    const double ratio = norm(y - z) / norm(y - image_point(z));
    if (ratio > 3.0) ++violations;
    worst = std::max(worst, ratio);
  }
  FitReport r = ratio_report("image_inequality", n, worst, 3.0);
  r.details.emplace_back("violations", static_cast<double>(violations));
  return r;
}

std::array<FitReport, 2> check_kernel_bounds(std::size_t n, std::uint64_t seed) {
  if (n < 10000) throw std::invalid_argument("check_kernel_bounds: n must be at least 1e4");
  Rng rng(seed);
  std::vector<double> yx(n), yy(n), zx(n), zy(n), k1x(n), k1y(n);
  std::vector<double> vx(n), vy(n), k2x(n), k2y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 y, v, z;
    do {
      y = i % 4 == 0 ? polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi)) : disk_point(rng, 0.5);
      z = disk_point(rng, 0.5);
      // Second point: mostly near y so the difference quotient is probed at
      // all scales, sometimes anywhere.
      if (uniform(rng) < 0.5) {
        v = y + polar(log_uniform(rng, 1e-6, 1.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
      } else {
        v = disk_point(rng, 0.5);
      }
    } while (y == z || v == z || v == y || norm2(v) > 1.0);
    yx[i] = y.x;
    yy[i] = y.y;
    zx[i] = z.x;
    zy[i] = z.y;
    vx[i] = v.x;
    vy[i] = v.y;
  }
  simd::kernel_disk_elementwise(yx, yy, zx, zy, k1x, k1y);
  simd::kernel_disk_elementwise(vx, vy, zx, zy, k2x, k2y);
  double k1 = 0.0, k2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 y{yx[i], yy[i]}, v{vx[i], vy[i]}, z{zx[i], zy[i]};
    k1 = std::max(k1, std::hypot(k1x[i], k1y[i]) * norm(y - z));
    const double diff = std::hypot(k1x[i] - k2x[i], k1y[i] - k2y[i]);
    k2 = std::max(k2, diff * norm(y - z) * norm(v - z) / norm(y - v));
  }
  return {ratio_report("kernel_K1", n, k1, 2.0 / std::numbers::pi + 1e-9),
          ratio_report("kernel_K2", n, k2, 10.0)};
}

std::array<FitReport, 2> check_k3_integrals(std::size_t pairs, std::size_t resolution,
                                            std::uint64_t seed) {
  if (resolution < 256) throw std::invalid_argument("check_k3_integrals: resolution must be at least 256");
  if (pairs < 2) throw std::invalid_argument("check_k3_integrals: need at least 2 pairs");
  Rng rng(seed);
  std::vector<Vec2> y1(pairs), y2(pairs);
  std::vector<double> d(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    d[i] = i == 0 ? 1e-4 : i == 1 ? 0.5 : log_uniform(rng, 1e-4, 0.5);
    for (;;) {
      const Vec2 a = polar(0.9 * std::sqrt(uniform(rng)), uniform(rng, 0.0, 2.0 * std::numbers::pi));
      const Vec2 b = a + polar(d[i], uniform(rng, 0.0, 2.0 * std::numbers::pi));
      if (norm(b) <= 0.95) {
        y1[i] = a;
        y2[i] = b;
        break;
      }
    }
  }
  std::vector<double> r_first(pairs), r_second(pairs);
  const simd::Backend backend = simd::active_backend();
  parallel_for(pairs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double h = loglip_modulus(d[i]);
      r_first[i] = k3_integral(backend, y1[i], y2[i], KernelSlot::first, resolution) / h;
      r_second[i] = k3_integral(backend, y1[i], y2[i], KernelSlot::second, resolution) / h;
    }
  });
  auto make = [&](const char* name, const std::vector<double>& r) {
    FitReport rep = ratio_report(name, pairs, *std::max_element(r.begin(), r.end()), 10.0);
    rep.details.emplace_back("resolution", static_cast<double>(resolution));
    rep.details.emplace_back("ratio_at_d_1e-4", r[0]);
    rep.details.emplace_back("ratio_at_d_0.5", r[1]);
    rep.details.emplace_back("min_ratio", *std::min_element(r.begin(), r.end()));
    return rep;
  };
  return {make("k3_first_argument", r_first), make("k3_second_argument", r_second)};
}

FitReport compare_constants(const std::string& name, const FitReport& coarse, const FitReport& fine,
                            double tolerance) {
  FitReport r;
  r.name = name;
  r.n_samples = coarse.n_samples + fine.n_samples;
  const double rel = std::abs(fine.fitted_constant - coarse.fitted_constant) /
                     std::abs(coarse.fitted_constant);
  r.max_ratio = rel;
  r.fitted_constant = fine.fitted_constant;
  r.threshold = tolerance;
  r.pass = coarse.pass && fine.pass && std::isfinite(rel) && rel <= tolerance;
  r.details.emplace_back("coarse_constant", coarse.fitted_constant);
  r.details.emplace_back("fine_constant", fine.fitted_constant);
  return r;
}

std::array<FitReport, 4> check_map_exponents(const ConformalMap& map, std::size_t corner) {
  const DomainSpec& dom = map.domain();
  if (dom.corners.empty()) throw std::invalid_argument("check_map_exponents: domain has no corners");
  if (corner >= dom.corners.size()) throw std::invalid_argument("check_map_exponents: corner index out of range");
  const Corner& c = dom.corners[corner];
  const double p = std::numbers::pi / c.theta;

  std::vector<double> radii;
  for (int k = 0; k <= 8; ++k) radii.push_back(std::pow(10.0, -1.0 - 0.5 * k));
  // Points on the bisector ray; the inverse is probed at their images, so
  // |T^{-1}(y) - x_k| is regressed against |y - T(x_k)|. Offsets are taken
  // relative to the corner so that r^{pi/theta} below roundoff of |T| ~ 1
  // is still resolved.
  std::vector<double> value, d1, d2, inv;
  for (double r : radii) {
    const Vec2 x = c.vertex + r * c.bisector;
    const MapEval e = map.forward(x);
    const Complex offset = map.offset_from_corner(corner, x);
    value.push_back(std::abs(offset));
    d1.push_back(std::abs(e.first_derivative));
    d2.push_back(std::abs(e.second_derivative));
    inv.push_back(norm(map.inverse_from_corner(corner, offset) - c.vertex));
  }
  const std::string tag = "corner" + std::to_string(corner) + "_";
  return {slope_report(tag + "map_value", radii, value, p, 0.01),
          slope_report(tag + "first_derivative", radii, d1, p - 1.0, 0.02),
          slope_report(tag + "second_derivative", radii, d2, p - 2.0, 0.05),
          slope_report(tag + "inverse", value, inv, 1.0 / p, 0.01)};
}

std::array<FitReport, 2> check_velocity_bounds(const ConformalMap& map, const DiskVorticity& vort,
                                               std::size_t n, std::uint64_t seed) {
  if (!vort.sup_norm_physical) {
    throw std::invalid_argument("check_velocity_bounds: vorticity has no physical sup norm (point data)");
  }
  if (n < 16) throw std::invalid_argument("check_velocity_bounds: n must be at least 16");
  const double sup = *vort.sup_norm_physical;
  const DomainSpec& dom = map.domain();
  Rng rng(seed);

  // Physical samples: half uniform, half near corners.
  std::vector<Vec2> xs = sample_interior(dom, n - n / 2, seed ^ 0x9e3779b97f4a7c15ULL);
  std::size_t corner_samples = 0;
  double closest = kInf;
  if (!dom.corners.empty()) {
    const std::size_t want = n / 2;
    std::size_t attempts = 0;
    while (corner_samples < want) {
      if (++attempts > 1000 * want) throw std::runtime_error("check_velocity_bounds: corner sampling failed");
      const std::size_t k = corner_samples % dom.corners.size();
      const Corner& c = dom.corners[k];
      // The first sample at each corner sits exactly at distance 1e-4.
      const double rho = corner_samples < dom.corners.size() ? 1e-4 : log_uniform(rng, 1e-4, dom.delta);
      const double phi = std::atan2(c.bisector.y, c.bisector.x) + 0.98 * c.theta * uniform(rng, -0.5, 0.5);
      const Vec2 x = c.vertex + polar(rho, phi);
      if (!contains(dom, x)) continue;
      xs.push_back(x);
      closest = std::min(closest, rho);
      ++corner_samples;
    }
  }
  const std::vector<Vec2> u = velocity_physical(map, vort, xs);
  double worst_u = 0.0;
  for (const Vec2& v : u) worst_u = std::max(worst_u, sup == 0.0 ? 0.0 : norm(v) / sup);
  FitReport r1 = ratio_report("velocity_uniform_bound", xs.size(), worst_u, 10.0);
  r1.details.emplace_back("corner_samples", static_cast<double>(corner_samples));
  if (std::isfinite(closest)) r1.details.emplace_back("closest_corner_distance", closest);

  // Disk pairs.
  std::vector<Vec2> images;
  for (const Corner& c : dom.corners) images.push_back(c.disk_image);
  std::vector<double> ax, ay, bx, by, dist;
  std::size_t straddling = 0;
  double smallest = kInf;
  auto push = [&](Vec2 a, Vec2 b) {
    ax.push_back(a.x);
    ay.push_back(a.y);
    bx.push_back(b.x);
    by.push_back(b.y);
    dist.push_back(norm(a - b));
    smallest = std::min(smallest, dist.back());
  };
  for (std::size_t i = 0; ax.size() < n; ++i) {
    const Vec2 anchor = images.empty() ? polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi))
                                       : images[i % images.size()];
    const int kind = static_cast<int>(i % 4);
    if (kind == 0) {
      // Straddling the anchor tangentially, at depth eps from the circle.
      const double eps = log_uniform(rng, 1e-6, 1e-1);
      const double d = eps * log_uniform(rng, 0.1, 2.0);
      const Vec2 base = (1.0 - eps) * anchor;
      const Vec2 t = perp(anchor);
      const Vec2 a = base + 0.5 * d * t, b = base - 0.5 * d * t;
      if (!(norm2(a) < 1.0) || !(norm2(b) < 1.0)) continue;
      push(a, b);
      ++straddling;
    } else if (kind == 1) {
      // Tiny separations close to the anchor.
      const double d = i < 4 * images.size() + 4 ? 1e-6 : log_uniform(rng, 1e-6, 1e-4);
      const Vec2 a = (1.0 - log_uniform(rng, 1e-5, 1e-1)) * polar(1.0, std::atan2(anchor.y, anchor.x) +
                                                                           uniform(rng, -0.05, 0.05));
      const Vec2 b = a + polar(d, uniform(rng, 0.0, 2.0 * std::numbers::pi));
      if (!(norm2(a) < 1.0) || !(norm2(b) < 1.0)) continue;
      push(a, b);
    } else {
      const Vec2 a = disk_point(rng, 0.2);
      const Vec2 b = a + polar(log_uniform(rng, 1e-6, 0.5), uniform(rng, 0.0, 2.0 * std::numbers::pi));
      if (!(norm2(b) < 1.0)) continue;
      push(a, b);
    }
  }
  std::vector<double> ux1(n), uy1(n), ux2(n), uy2(n);
  velocity_disk(map, vort, ax, ay, ux1, uy1);
  velocity_disk(map, vort, bx, by, ux2, uy2);
  double worst_l = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sup == 0.0) break;
    const double diff = std::hypot(ux1[i] - ux2[i], uy1[i] - uy2[i]);
    worst_l = std::max(worst_l, diff / (sup * loglip_modulus(dist[i])));
  }
  FitReport r2 = ratio_report("velocity_loglip_bound", n, worst_l, 10.0);
  r2.details.emplace_back("straddling_pairs", static_cast<double>(straddling));
  r2.details.emplace_back("smallest_separation", smallest);
  return {r1, r2};
}

FitReport check_w1p_growth(const ConformalMap& map, const DiskVorticity& vort,
                           std::span<const double> p_list, std::size_t grid) {
  if (p_list.empty()) throw std::invalid_argument("check_w1p_growth: p list is empty");
  for (double p : p_list) {
    if (!(p >= 2.0 && p <= 16.0)) throw std::invalid_argument("check_w1p_growth: p must lie in [2, 16]");
  }
  if (grid < 8) throw std::invalid_argument("check_w1p_growth: grid must be at least 8");
  if (!vort.sup_norm_physical) {
    throw std::invalid_argument("check_w1p_growth: vorticity has no physical sup norm (point data)");
  }
  const DomainSpec& dom = map.domain();
  const BoundingBox box = bounding_box(dom);
  const double hx = (box.hi.x - box.lo.x) / static_cast<double>(grid);
  const double hy = (box.hi.y - box.lo.y) / static_cast<double>(grid);
  auto centre = [&](std::size_t i, std::size_t j) {
    return Vec2{box.lo.x + (static_cast<double>(i) + 0.5) * hx,
                box.lo.y + (static_cast<double>(j) + 0.5) * hy};
  };

  const std::size_t cells = grid * grid;
  std::vector<long> index(cells, -1);
  std::vector<Vec2> pts;
  for (std::size_t j = 0; j < grid; ++j) {
    for (std::size_t i = 0; i < grid; ++i) {
      const Vec2 x = centre(i, j);
      if (!contains(dom, x)) continue;
      index[j * grid + i] = static_cast<long>(pts.size());
      pts.push_back(x);
    }
  }
  const std::vector<Vec2> u = velocity_physical(map, vort, pts);

  auto at = [&](long i, long j) -> const Vec2* {
    if (i < 0 || j < 0 || i >= static_cast<long>(grid) || j >= static_cast<long>(grid)) return nullptr;
    const long k = index[static_cast<std::size_t>(j) * grid + static_cast<std::size_t>(i)];
    return k < 0 ? nullptr : &u[static_cast<std::size_t>(k)];
  };
  auto derivative = [&](const Vec2* minus, const Vec2& mid, const Vec2* plus, double h, bool& isolated) {
    if (minus && plus) return (*plus - *minus) / (2.0 * h);
    if (plus) return (*plus - mid) / h;
    if (minus) return (mid - *minus) / h;
    isolated = true;
    return Vec2{};
  };

  std::vector<double> grad(pts.size());
  std::size_t isolated_count = 0;
  for (std::size_t j = 0; j < grid; ++j) {
    for (std::size_t i = 0; i < grid; ++i) {
      const long k = index[j * grid + i];
      if (k < 0) continue;
      const long li = static_cast<long>(i), lj = static_cast<long>(j);
      const Vec2& mid = u[static_cast<std::size_t>(k)];
      bool isolated = false;
      const Vec2 dx = derivative(at(li - 1, lj), mid, at(li + 1, lj), hx, isolated);
      const Vec2 dy = derivative(at(li, lj - 1), mid, at(li, lj + 1), hy, isolated);
      if (isolated) ++isolated_count;
      const double g = std::sqrt(norm2(dx) + norm2(dy));
      if (!std::isfinite(g)) {
        const Vec2 x = pts[static_cast<std::size_t>(k)];
        throw std::runtime_error("check_w1p_growth: non-finite difference at grid cell (" +
                                 std::to_string(i) + "," + std::to_string(j) + ") x=(" +
                                 std::to_string(x.x) + "," + std::to_string(x.y) + ")");
      }
      grad[static_cast<std::size_t>(k)] = g;
    }
  }

  const double sup = *vort.sup_norm_physical;
  const double cell_area = hx * hy;
  FitReport r;
  r.name = "w1p_growth";
  r.n_samples = pts.size();
  r.threshold = kInf;
  bool finite = true;
  bool monotone = true;
  double previous = -1.0;
  double worst = 0.0;
  for (double p : p_list) {
    // Scale by the max before powering so p = 16 cannot overflow.
    const double gmax = grad.empty() ? 0.0 : *std::max_element(grad.begin(), grad.end());
    double norm_p = 0.0;
    if (gmax > 0.0) {
      double acc = 0.0;
      for (double g : grad) acc += std::pow(g / gmax, p) * cell_area;
      norm_p = gmax * std::pow(acc, 1.0 / p);
    }
    const double ratio = sup == 0.0 ? 0.0 : norm_p / sup;
    finite = finite && std::isfinite(ratio);
    if (ratio < previous) monotone = false;
    previous = ratio;
    worst = std::max(worst, ratio);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    r.details.emplace_back(std::string("norm_p") + buf, norm_p);
    r.details.emplace_back(std::string("ratio_p") + buf, ratio);
  }
  r.details.emplace_back("monotone_in_p", monotone ? 1.0 : 0.0);
  r.details.emplace_back("isolated_points", static_cast<double>(isolated_count));
  r.max_ratio = worst;
  r.fitted_constant = worst;
  r.pass = finite;
  return r;
}

double gronwall_envelope(double f0, double c, double t) {
  const double e = std::exp(-c * t);
  return std::pow(f0, e) * std::exp(1.0 - e);
}

double margin_envelope(double m0, double c, double t) {
  const double e = std::exp(c * t);
  return std::exp(1.0 - e) * std::pow(m0, e);
}

double required_gronwall_constant(double f0, double f, double t) {
  if (f <= f0) return 0.0;
  if (!(t > 0.0)) return kInf;
  const double ratio = (1.0 - std::log(f)) / (1.0 - std::log(f0));
  if (!(ratio > 0.0)) return kInf;
  return -std::log(ratio) / t;
}

double required_margin_constant(double m0, double m, double t) {
  if (m >= m0) return 0.0;
  if (!(m > 0.0) || !(t > 0.0)) return kInf;
  return std::log((1.0 - std::log(m)) / (1.0 - std::log(m0))) / t;
}

GronwallResult gronwall_experiment(const ConformalMap& map, const DiskVorticity& vort,
                                   std::span<const double> d0, const FlowConfig& cfg,
                                   std::uint64_t seed) {
  if (cfg.stepper != Stepper::rk4) {
    throw std::invalid_argument("gronwall_experiment: flow.stepper must be rk4 so twin records align");
  }
  if (d0.empty()) throw std::invalid_argument("gronwall_experiment: d0 list is empty");
  for (double v : d0) {
    if (!(v >= 0.0 && v <= 1e-2)) throw std::invalid_argument("gronwall_experiment: d0 must lie in [0, 1e-2]");
  }
  FlowConfig run = cfg;
  run.record_particles = true;
  const AdvectResult base = advect(map, vort, {}, run);

  const std::size_t np = vort.size();
  Rng rng(seed);
  std::vector<Vec2> dir(np);
  for (auto& e : dir) e = polar(1.0, uniform(rng, 0.0, 2.0 * std::numbers::pi));

  GronwallResult out;
  out.d0.assign(d0.begin(), d0.end());
  out.times = np > 0 ? base.particles.front().times : std::vector<double>{};
  for (double dist : d0) {
    DiskVorticity moved = vort;
    for (std::size_t i = 0; i < np; ++i) {
      const Vec2 z = vort.position(i);
      Vec2 p = z + dist * dir[i];
      if (!(norm2(p) < 1.0)) p = z - dist * (z / norm(z));
      moved.x[i] = p.x;
      moved.y[i] = p.y;
    }
    const AdvectResult twin = advect(map, moved, {}, run);
    std::vector<double> f(out.times.size(), 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < np; ++i) {
        sum += norm(base.particles[i].disk_positions[j] - twin.particles[i].disk_positions[j]);
      }
      f[j] = np > 0 ? sum / static_cast<double>(np) : 0.0;
    }
    out.f.push_back(std::move(f));
  }

  // One C for the domain: the largest constant any sample demands.
  double c = 0.0;
  std::size_t samples = 0;
  for (std::size_t k = 0; k < d0.size(); ++k) {
    const double f0 = out.f[k].empty() ? 0.0 : out.f[k][0];
    if (!(f0 > 0.0)) continue;
    for (std::size_t j = 1; j < out.times.size(); ++j) {
      c = std::max(c, required_gronwall_constant(f0, out.f[k][j], out.times[j]));
      ++samples;
    }
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < d0.size(); ++k) {
    const double f0 = out.f[k].empty() ? 0.0 : out.f[k][0];
    for (std::size_t j = 1; j < out.times.size(); ++j) {
      const double f = out.f[k][j];
      if (f0 == 0.0) {
        worst = std::max(worst, f == 0.0 ? 0.0 : kInf);
        continue;
      }
      worst = std::max(worst, f / gronwall_envelope(f0, c, out.times[j]));
    }
  }

  // Smaller initial separation must give smaller separation later.
  std::vector<std::size_t> order(d0.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d0[a] > d0[b]; });
  bool monotone = true;
  for (std::size_t q = 1; q < order.size(); ++q) {
    const auto& big = out.f[order[q - 1]];
    const auto& small = out.f[order[q]];
    if (d0[order[q]] == d0[order[q - 1]]) continue;
    for (std::size_t j = 1; j < out.times.size(); ++j) {
      if (small[j] > 1.05 * big[j]) monotone = false;
    }
    if (!out.times.empty() && !(small.back() < big.back())) monotone = false;
  }

  FitReport& r = out.report;
  r.name = "gronwall";
  r.n_samples = samples;
  r.fitted_constant = c;
  r.max_ratio = worst;
  r.threshold = 1.0 + 1e-9;
  r.pass = std::isfinite(c) && worst <= r.threshold && monotone;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < d0.size(); ++k) {
    if (d0[k] > 0.0 && !out.f[k].empty() && out.f[k].back() > 0.0) {
      lx.push_back(std::log(d0[k]));
      ly.push_back(std::log(out.f[k].back()));
    }
  }
  if (lx.size() >= 2) {
    const LinearFit fit = linear_fit(lx, ly);
    r.slope = fit.slope;
    r.r_squared = fit.r_squared;
  }
  r.details.emplace_back("particles", static_cast<double>(np));
  r.details.emplace_back("monotone_in_d0", monotone ? 1.0 : 0.0);
  for (std::size_t k = 0; k < d0.size(); ++k) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "f_end_d0_%g", d0[k]);
    r.details.emplace_back(buf, out.f[k].empty() ? 0.0 : out.f[k].back());
  }
  if (std::isfinite(c) && !out.times.empty()) {
    // Exponent the envelope allows at t_end: f ~ f0^{exp(-C t_end)}.
    r.details.emplace_back("envelope_exponent_at_t_end", std::exp(-c * out.times.back()));
  }
  return out;
}

BoundaryResult boundary_attainment_experiment(const ConformalMap& map, const DiskVorticity& vort,
                                              std::span<const double> margins,
                                              const FlowConfig& cfg, std::size_t per_margin) {
  if (margins.empty()) throw std::invalid_argument("boundary_attainment_experiment: margins list is empty");
  if (per_margin == 0) throw std::invalid_argument("boundary_attainment_experiment: per_margin must be positive");
  std::vector<Vec2> tracers;
  BoundaryResult out;
  for (double m : margins) {
    if (!(m > 0.0 && m <= 0.5)) {
      throw std::invalid_argument("boundary_attainment_experiment: margins must lie in (0, 0.5]");
    }
    for (std::size_t j = 0; j < per_margin; ++j) {
      const double phi = 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(per_margin);
      tracers.push_back(polar(1.0 - m, phi));
      out.initial_margins.push_back(m);
    }
  }
  FlowConfig run = cfg;
  run.record_particles = false;
  AdvectResult res = advect(map, vort, tracers, run);
  out.tracers = std::move(res.tracers);

  double c = 0.0;
  double lowest = kInf;
  std::size_t samples = 0;
  for (std::size_t k = 0; k < out.tracers.size(); ++k) {
    const Trajectory& tr = out.tracers[k];
    const double m0 = 1.0 - norm(tr.disk_positions.front());
    for (std::size_t j = 1; j < tr.times.size(); ++j) {
      const double m = 1.0 - norm(tr.disk_positions[j]);
      lowest = std::min(lowest, m);
      c = std::max(c, required_margin_constant(m0, m, tr.times[j]));
      ++samples;
    }
  }
  double worst = 0.0;
  for (const Trajectory& tr : out.tracers) {
    const double m0 = 1.0 - norm(tr.disk_positions.front());
    for (std::size_t j = 1; j < tr.times.size(); ++j) {
      const double m = 1.0 - norm(tr.disk_positions[j]);
      worst = std::max(worst, margin_envelope(m0, c, tr.times[j]) / m);
    }
  }
  FitReport& r = out.report;
  r.name = "boundary_attainment";
  r.n_samples = samples;
  r.fitted_constant = c;
  r.max_ratio = worst;
  r.threshold = 1.0 + 1e-9;
  r.pass = std::isfinite(c) && lowest > 0.0 && worst <= r.threshold;
  r.details.emplace_back("tracers", static_cast<double>(out.tracers.size()));
  r.details.emplace_back("lowest_margin", std::isfinite(lowest) ? lowest : 1.0);
  return out;
}

}  // namespace corner_euler
