#pragma once

#include <span>
#include <vector>

#include "corner_euler/conformal.hpp"
#include "corner_euler/vec2.hpp"
#include "corner_euler/vorticity.hpp"

namespace corner_euler {

/// Reflection across the unit circle, z / |z|^2. Throws for z = 0.
Vec2 image_point(Vec2 z);

/// Disk Biot-Savart kernel
///   K_D(y, z) = (1/2pi) [(y - z)/|y - z|^2 - (y - z*)/|y - z*|^2]^perp,
/// with K_D(y, 0) = (1/2pi) y^perp/|y|^2. Throws std::invalid_argument for y = z.
Vec2 kernel_disk(Vec2 y, Vec2 z);

/// K_D(y1, z) - K_D(y2, z). Throws when z coincides with y1 or y2.
Vec2 kernel_difference(Vec2 y1, Vec2 y2, Vec2 z);

/// Disk-coordinate field of the particles at y, before the pushforward
/// factor: sum_i w_i K_sigma(y, z_i).
Vec2 disk_field(const DiskVorticity& vort, Vec2 y);

/// Pushed velocity U(y) = |T'(T^{-1}(y))|^2 sum_i w_i K_sigma(y, z_i).
Vec2 velocity_disk(const ConformalMap& map, const DiskVorticity& vort, Vec2 y);

/// U at many targets (structure of arrays). Parallel over targets.
void velocity_disk(const ConformalMap& map, const DiskVorticity& vort, std::span<const double> yx,
                   std::span<const double> yy, std::span<double> ux, std::span<double> uy);

/// Same, with particles given as a raw source view and blob radius sigma.
void velocity_disk(const ConformalMap& map, simd::Sources src, double sigma,
                   std::span<const double> yx, std::span<const double> yy, std::span<double> ux,
                   std::span<double> uy);

/// Physical velocity u(x) = DT(x)^T sum_i w_i K_sigma(T(x), z_i). Zero at
/// corner vertices.
Vec2 velocity_physical(const ConformalMap& map, const DiskVorticity& vort, Vec2 x);

/// u at many physical points. Parallel over points.
std::vector<Vec2> velocity_physical(const ConformalMap& map, const DiskVorticity& vort,
                                    std::span<const Vec2> xs);

}  // namespace corner_euler
