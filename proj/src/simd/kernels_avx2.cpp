// Compiled with -mavx2 -mfma -ffp-contract=off. Only reached through the
// dispatcher after a CPU feature check.

#include <immintrin.h>

#include "corner_euler/simd/kernels.hpp"
#include "corner_euler/simd/pair_kernel.hpp"

namespace corner_euler::simd::detail {

namespace {

struct Field4 {
  __m256d x;
  __m256d y;
};

// Four lanes of pair_field(); lane arithmetic mirrors the scalar version
// operation for operation.
inline Field4 pair_field4(__m256d yx, __m256d yy, __m256d zx, __m256d zy, __m256d sigma2) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);

  const __m256d dx = _mm256_sub_pd(yx, zx);
  const __m256d dy = _mm256_sub_pd(yy, zy);
  const __m256d a =
      _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), sigma2);
  const __m256d omq =
      _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(zx, zx), _mm256_mul_pd(zy, zy)));
  const __m256d m_raw =
      _mm256_sub_pd(one, _mm256_add_pd(_mm256_mul_pd(yx, yx), _mm256_mul_pd(yy, yy)));
  const __m256d tol = _mm256_set1_pd(kOnCircle);
  const __m256d on_circle = _mm256_and_pd(_mm256_cmp_pd(m_raw, tol, _CMP_LE_OQ),
                                          _mm256_cmp_pd(m_raw, _mm256_sub_pd(zero, tol), _CMP_GE_OQ));
  const __m256d m = _mm256_andnot_pd(on_circle, m_raw);
  const __m256d b = _mm256_add_pd(a, _mm256_mul_pd(omq, m));
  const __m256d c = _mm256_div_pd(omq, b);
  const __m256d t = _mm256_and_pd(_mm256_div_pd(m, a), _mm256_cmp_pd(a, zero, _CMP_NEQ_OQ));
  const __m256d fx = _mm256_mul_pd(c, _mm256_add_pd(yx, _mm256_mul_pd(t, dx)));
  const __m256d fy = _mm256_mul_pd(c, _mm256_add_pd(yy, _mm256_mul_pd(t, dy)));
  return {fx, fy};
}

}  // namespace

// Vectorised over targets: lane k accumulates sources in index order, so
// each lane reproduces the scalar sum exactly.
void biot_savart_sum_avx2(const double* tx, const double* ty, std::size_t nt, Sources src,
                          double sigma2, double* ux, double* uy) {
  const std::size_t ns = src.x.size();
  const double* sx = src.x.data();
  const double* sy = src.y.data();
  const double* sw = src.w.data();
  const __m256d s2 = _mm256_set1_pd(sigma2);
  const __m256d scale = _mm256_set1_pd(kInvTwoPi);
  const __m256d neg_scale = _mm256_set1_pd(-kInvTwoPi);

  std::size_t t = 0;
  for (; t + 4 <= nt; t += 4) {
    const __m256d yx = _mm256_loadu_pd(tx + t);
    const __m256d yy = _mm256_loadu_pd(ty + t);
    __m256d accx = _mm256_setzero_pd();
    __m256d accy = _mm256_setzero_pd();
    for (std::size_t i = 0; i < ns; ++i) {
      const Field4 f =
          pair_field4(yx, yy, _mm256_set1_pd(sx[i]), _mm256_set1_pd(sy[i]), s2);
      const __m256d w = _mm256_set1_pd(sw[i]);
      accx = _mm256_add_pd(accx, _mm256_mul_pd(w, f.x));
      accy = _mm256_add_pd(accy, _mm256_mul_pd(w, f.y));
    }
    _mm256_storeu_pd(ux + t, _mm256_mul_pd(neg_scale, accy));
    _mm256_storeu_pd(uy + t, _mm256_mul_pd(scale, accx));
  }
  if (t < nt) biot_savart_sum_scalar(tx + t, ty + t, nt - t, src, sigma2, ux + t, uy + t);
}

void kernel_disk_elementwise_avx2(const double* yx, const double* yy, const double* zx,
                                  const double* zy, std::size_t n, double* kx, double* ky) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d scale = _mm256_set1_pd(kInvTwoPi);
  const __m256d neg_scale = _mm256_set1_pd(-kInvTwoPi);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const Field4 f = pair_field4(_mm256_loadu_pd(yx + j), _mm256_loadu_pd(yy + j),
                                 _mm256_loadu_pd(zx + j), _mm256_loadu_pd(zy + j), zero);
    _mm256_storeu_pd(kx + j, _mm256_mul_pd(neg_scale, f.y));
    _mm256_storeu_pd(ky + j, _mm256_mul_pd(scale, f.x));
  }
  if (j < n) kernel_disk_elementwise_scalar(yx + j, yy + j, zx + j, zy + j, n - j, kx + j, ky + j);
}

}  // namespace corner_euler::simd::detail
