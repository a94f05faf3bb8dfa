#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "corner_euler/biot_savart.hpp"
#include "corner_euler/parallel.hpp"
#include "corner_euler/quadrature.hpp"
#include "corner_euler/simd/kernels.hpp"
#include "doctest.h"

using namespace corner_euler;
namespace sd = corner_euler::simd;

namespace {

struct Cloud {
  std::vector<double> x, y, w;
};

Cloud cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    c.x.push_back(p.x);
    c.y.push_back(p.y);
    c.w.push_back(s(rng));
  }
  return c;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class BackendGuard {
 public:
  BackendGuard() : saved_(sd::active_backend()) {}
  ~BackendGuard() { sd::set_backend(saved_); }

 private:
  sd::Backend saved_;
};

}  // namespace

TEST_CASE("backend names") {
  CHECK(sd::to_string(sd::Backend::scalar) == "scalar");
  CHECK(sd::to_string(sd::Backend::avx2) == "avx2");
}

TEST_CASE("set_backend switches the active kernels") {
  BackendGuard guard;
  sd::set_backend(sd::Backend::scalar);
  CHECK(sd::active_backend() == sd::Backend::scalar);
  if (sd::avx2_available()) {
    sd::set_backend(sd::Backend::avx2);
    CHECK(sd::active_backend() == sd::Backend::avx2);
  } else {
    CHECK_THROWS_AS(sd::set_backend(sd::Backend::avx2), std::runtime_error);
  }
}

TEST_CASE("biot_savart_sum: scalar and avx2 agree bit for bit") {
  if (!sd::avx2_available()) {
    MESSAGE("AVX2 not available; equivalence not exercised");
    return;
  }
  for (std::size_t nt : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u}) {
    for (std::size_t ns : {0u, 1u, 2u, 7u, 33u}) {
      for (double sigma2 : {0.0, 1e-4}) {
        Cloud t = cloud(nt, 100 + nt), s = cloud(ns, 200 + ns);
        // Coincident target/source and exact circle points exercise both masks.
        if (nt > 2 && ns > 0) {
          t.x[1] = s.x[0];
          t.y[1] = s.y[0];
          t.x[2] = 0.6;
          t.y[2] = 0.8;
        }
        const sd::Sources src{s.x, s.y, s.w};
        std::vector<double> ax(nt), ay(nt), bx(nt), by(nt);
        sd::biot_savart_sum(sd::Backend::scalar, t.x, t.y, src, sigma2, ax, ay);
        sd::biot_savart_sum(sd::Backend::avx2, t.x, t.y, src, sigma2, bx, by);
        CHECK(same_bits(ax, bx));
        CHECK(same_bits(ay, by));
      }
    }
  }
}

TEST_CASE("kernel_disk_elementwise: scalar and avx2 agree bit for bit") {
  if (!sd::avx2_available()) return;
  for (std::size_t n : {1u, 4u, 6u, 31u, 1000u}) {
    Cloud y = cloud(n, 7 + n), z = cloud(n, 9 + n);
    y.x[0] = z.x[0];
    y.y[0] = z.y[0];
    if (n > 1) {
      z.x[1] = 0.0;
      z.y[1] = 0.0;
    }
    std::vector<double> ax(n), ay(n), bx(n), by(n);
    sd::kernel_disk_elementwise(sd::Backend::scalar, y.x, y.y, z.x, z.y, ax, ay);
    sd::kernel_disk_elementwise(sd::Backend::avx2, y.x, y.y, z.x, z.y, bx, by);
    CHECK(same_bits(ax, bx));
    CHECK(same_bits(ay, by));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::isfinite(ax[i]));
      CHECK(std::isfinite(ay[i]));
    }
  }
}

TEST_CASE("elementwise kernel matches kernel_disk on distinct pairs") {
  const Cloud y = cloud(500, 1), z = cloud(500, 2);
  std::vector<double> kx(500), ky(500);
  sd::kernel_disk_elementwise(y.x, y.y, z.x, z.y, kx, ky);
  for (std::size_t i = 0; i < 500; ++i) {
    const Vec2 k = kernel_disk({y.x[i], y.y[i]}, {z.x[i], z.y[i]});
    CHECK(k.x == kx[i]);
    CHECK(k.y == ky[i]);
  }
}

TEST_CASE("higher-level results do not depend on the backend") {
  if (!sd::avx2_available()) return;
  BackendGuard guard;
  const ConformalMap m(make_sector(std::numbers::pi / 2));
  const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.45, 0.45}, 0.2}, 1.0}, 16);
  const auto xs = sample_interior(m.domain(), 101, 4);

  sd::set_backend(sd::Backend::scalar);
  const auto us = velocity_physical(m, v, xs);
  const double k3s = k3_integral({0.1, 0.2}, {0.12, 0.19}, KernelSlot::second, 256);
  sd::set_backend(sd::Backend::avx2);
  const auto ua = velocity_physical(m, v, xs);
  const double k3a = k3_integral({0.1, 0.2}, {0.12, 0.19}, KernelSlot::second, 256);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(us[i] == ua[i]);
  CHECK(k3s == k3a);
}

TEST_CASE("parallel results do not depend on the worker count") {
  const std::size_t saved = worker_count();
  const ConformalMap m(make_half_disk());
  const DiskVorticity v = from_physical_patch(m, Patch{CirclePatch{{0.0, 0.4}, 0.2}, 1.0}, 16);
  const auto xs = sample_interior(m.domain(), 97, 8);
  set_worker_count(1);
  const auto one = velocity_physical(m, v, xs);
  set_worker_count(3);
  const auto three = velocity_physical(m, v, xs);
  set_worker_count(saved);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(one[i] == three[i]);

  std::vector<int> hits(1000, 0);
  set_worker_count(4);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  set_worker_count(saved);
  for (int h : hits) CHECK(h == 1);
}
