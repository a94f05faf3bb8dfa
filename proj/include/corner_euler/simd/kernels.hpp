#pragma once

// Data-parallel inner loops of the disk Biot-Savart law. Each entry point
// has a scalar reference implementation and an AVX2 variant; the active
// backend is chosen once at startup from CPU features and can be forced
// with CORNER_EULER_SIMD=scalar|avx2 or set_backend().

#include <cstddef>
#include <span>
#include <string_view>

namespace corner_euler::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);

/// True when the binary carries the AVX2 kernels and the CPU runs them.
bool avx2_available();

Backend active_backend();

/// Throws std::runtime_error when requesting avx2 on a CPU without it.
void set_backend(Backend b);

/// Structure-of-arrays view of point vortices in disk coordinates.
struct Sources {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> w;
};

/// Velocity induced at each target by all sources under the disk kernel:
///   out(t) = sum_i w_i * K_sigma(t, z_i)
/// where the free-space term uses |t - z_i|^2 + sigma2 and the image term
/// |t - z_i*|^2 + sigma2/|z_i|^2, which keeps the field exactly tangent on the
/// unit circle. Coincident points (zero smoothed distance) contribute nothing
/// to the free-space term. Sources are summed in index order per target.
void biot_savart_sum(std::span<const double> tx, std::span<const double> ty, Sources src,
                     double sigma2, std::span<double> ux, std::span<double> uy);
void biot_savart_sum(Backend b, std::span<const double> tx, std::span<const double> ty,
                     Sources src, double sigma2, std::span<double> ux, std::span<double> uy);

/// Elementwise K_D(y_j, z_j), unsmoothed. Coincident pairs keep only the image term.
void kernel_disk_elementwise(std::span<const double> yx, std::span<const double> yy,
                             std::span<const double> zx, std::span<const double> zy,
                             std::span<double> kx, std::span<double> ky);
void kernel_disk_elementwise(Backend b, std::span<const double> yx, std::span<const double> yy,
                             std::span<const double> zx, std::span<const double> zy,
                             std::span<double> kx, std::span<double> ky);

namespace detail {

void biot_savart_sum_scalar(const double* tx, const double* ty, std::size_t nt, Sources src,
                            double sigma2, double* ux, double* uy);
void kernel_disk_elementwise_scalar(const double* yx, const double* yy, const double* zx,
                                    const double* zy, std::size_t n, double* kx, double* ky);

#if defined(CORNER_EULER_HAVE_AVX2)
void biot_savart_sum_avx2(const double* tx, const double* ty, std::size_t nt, Sources src,
                          double sigma2, double* ux, double* uy);
void kernel_disk_elementwise_avx2(const double* yx, const double* yy, const double* zx,
                                  const double* zy, std::size_t n, double* kx, double* ky);
#endif

}  // namespace detail

}  // namespace corner_euler::simd
