#pragma once

#include <cstddef>
#include <vector>

#include "corner_euler/simd/kernels.hpp"
#include "corner_euler/vec2.hpp"

namespace corner_euler {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n);

/// Which kernel argument carries the two evaluation points.
enum class KernelSlot { first, second };

/// Integral over the unit disk of |K_D(y1, z) - K_D(y2, z)| (KernelSlot::first)
/// or |K_D(z, y1) - K_D(z, y2)| (KernelSlot::second).
///
/// The integrand is split with the partition of unity
///   chi_1 = |z - y2| / (|z - y1| + |z - y2|),  chi_2 = 1 - chi_1,
/// and each piece is integrated in polar coordinates about its own singular
/// point. Radial panels break at d/8, d/4, ..., d, 2d, ... (d = |y1 - y2|)
/// up to the circle; `resolution` angles are used with Gauss-Legendre of
/// order max(8, resolution/32) per panel. Both points must satisfy |y| < 1.
/// Throws std::runtime_error on a non-finite quadrature value.
double k3_integral(Vec2 y1, Vec2 y2, KernelSlot slot, std::size_t resolution);
double k3_integral(simd::Backend backend, Vec2 y1, Vec2 y2, KernelSlot slot,
                   std::size_t resolution);

}  // namespace corner_euler
