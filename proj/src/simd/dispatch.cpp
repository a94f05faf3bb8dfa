#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "corner_euler/simd/kernels.hpp"

namespace corner_euler::simd {

namespace {

bool cpu_has_avx2() {
#if defined(CORNER_EULER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  const bool have = cpu_has_avx2();
  if (const char* env = std::getenv("CORNER_EULER_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && have) return Backend::avx2;
  }
  return have ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{initial_backend()};
  return slot;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("simd: mismatched span sizes in ") + what);
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

bool avx2_available() {
  static const bool have = cpu_has_avx2();
  return have;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) {
    throw std::runtime_error("simd: avx2 backend requested but not available");
  }
  backend_slot().store(b, std::memory_order_relaxed);
}

void biot_savart_sum(Backend b, std::span<const double> tx, std::span<const double> ty,
                     Sources src, double sigma2, std::span<double> ux, std::span<double> uy) {
  check_sizes(tx.size(), ty.size(), "biot_savart_sum targets");
  check_sizes(tx.size(), ux.size(), "biot_savart_sum output");
  check_sizes(tx.size(), uy.size(), "biot_savart_sum output");
  check_sizes(src.x.size(), src.y.size(), "biot_savart_sum sources");
  check_sizes(src.x.size(), src.w.size(), "biot_savart_sum weights");
#if defined(CORNER_EULER_HAVE_AVX2)
  if (b == Backend::avx2) {
    detail::biot_savart_sum_avx2(tx.data(), ty.data(), tx.size(), src, sigma2, ux.data(), uy.data());
    return;
  }
#endif
  (void)b;
  detail::biot_savart_sum_scalar(tx.data(), ty.data(), tx.size(), src, sigma2, ux.data(), uy.data());
}

void biot_savart_sum(std::span<const double> tx, std::span<const double> ty, Sources src,
                     double sigma2, std::span<double> ux, std::span<double> uy) {
  biot_savart_sum(active_backend(), tx, ty, src, sigma2, ux, uy);
}

void kernel_disk_elementwise(Backend b, std::span<const double> yx, std::span<const double> yy,
                             std::span<const double> zx, std::span<const double> zy,
                             std::span<double> kx, std::span<double> ky) {
  const std::size_t n = yx.size();
  check_sizes(n, yy.size(), "kernel_disk_elementwise");
  check_sizes(n, zx.size(), "kernel_disk_elementwise");
  check_sizes(n, zy.size(), "kernel_disk_elementwise");
  check_sizes(n, kx.size(), "kernel_disk_elementwise");
  check_sizes(n, ky.size(), "kernel_disk_elementwise");
#if defined(CORNER_EULER_HAVE_AVX2)
  if (b == Backend::avx2) {
    detail::kernel_disk_elementwise_avx2(yx.data(), yy.data(), zx.data(), zy.data(), n, kx.data(),
                                         ky.data());
    return;
  }
#endif
  (void)b;
  detail::kernel_disk_elementwise_scalar(yx.data(), yy.data(), zx.data(), zy.data(), n, kx.data(),
                                         ky.data());
}

void kernel_disk_elementwise(std::span<const double> yx, std::span<const double> yy,
                             std::span<const double> zx, std::span<const double> zy,
                             std::span<double> kx, std::span<double> ky) {
  kernel_disk_elementwise(active_backend(), yx, yy, zx, zy, kx, ky);
}

}  // namespace corner_euler::simd
