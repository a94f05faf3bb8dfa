#pragma once

// Per-pair disk kernel shared by the scalar backend, the AVX2 remainder
// loops and the single-pair API.

#include <numbers>

namespace corner_euler::simd {

inline constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

/// |1 - |y|^2| at or below this counts as on the unit circle, so that
/// rounded boundary points get an exactly tangent field.
inline constexpr double kOnCircle = 8.0 * 2.220446049250313e-16;

/// F = (y - z)/(|y - z|^2 + s) - (y - z*)/(|y - z*|^2 + s/|z|^2), z* = z/|z|^2,
/// s = sigma2. K_D is (1/2pi) F^perp.
///
/// With A = |y - z|^2 + s, q = |z|^2 and B = A + (1 - q)(1 - |y|^2) the two
/// terms combine exactly into
///   F = (1 - q)/B * (y + (1 - |y|^2)(y - z)/A),
/// which is parallel to y on the unit circle, never forms z*, and has the
/// right limit y/|y|^2 at z = 0. When A = 0 (coincident points, s = 0) the
/// free-space term is dropped, which is the same formula with the A term
/// removed. 1 - |y|^2 is snapped to 0 within kOnCircle.
inline void pair_field(double yx, double yy, double zx, double zy, double sigma2, double& fx,
                       double& fy) {
  const double dx = yx - zx;
  const double dy = yy - zy;
  const double a = dx * dx + dy * dy + sigma2;
  const double omq = 1.0 - (zx * zx + zy * zy);
  const double m_raw = 1.0 - (yx * yx + yy * yy);
  const double m = (m_raw <= kOnCircle && m_raw >= -kOnCircle) ? 0.0 : m_raw;
  const double b = a + omq * m;
  const double c = omq / b;
  const double t = a != 0.0 ? m / a : 0.0;
  fx = c * (yx + t * dx);
  fy = c * (yy + t * dy);
}

}  // namespace corner_euler::simd
