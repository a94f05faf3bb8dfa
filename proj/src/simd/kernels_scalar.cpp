#include "corner_euler/simd/kernels.hpp"
#include "corner_euler/simd/pair_kernel.hpp"

namespace corner_euler::simd::detail {

void biot_savart_sum_scalar(const double* tx, const double* ty, std::size_t nt, Sources src,
                            double sigma2, double* ux, double* uy) {
  const std::size_t ns = src.x.size();
  const double* sx = src.x.data();
  const double* sy = src.y.data();
  const double* sw = src.w.data();
  for (std::size_t t = 0; t < nt; ++t) {
    double ax = 0.0;
    double ay = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      double fx, fy;
      pair_field(tx[t], ty[t], sx[i], sy[i], sigma2, fx, fy);
      ax += sw[i] * fx;
      ay += sw[i] * fy;
    }
    ux[t] = -kInvTwoPi * ay;
    uy[t] = kInvTwoPi * ax;
  }
}

void kernel_disk_elementwise_scalar(const double* yx, const double* yy, const double* zx,
                                    const double* zy, std::size_t n, double* kx, double* ky) {
  for (std::size_t j = 0; j < n; ++j) {
    double fx, fy;
    pair_field(yx[j], yy[j], zx[j], zy[j], 0.0, fx, fy);
    kx[j] = -kInvTwoPi * fy;
    ky[j] = kInvTwoPi * fx;
  }
}

}  // namespace corner_euler::simd::detail
