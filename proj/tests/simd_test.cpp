//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>
#include <vector>

#include "targen/simd/kernels.hpp"

using targen::simd::Kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

// Every lane must be bitwise identical to the scalar reference, including
// the unaligned tail.
void check_lane_equivalence(const Kernels& ref, const Kernels& lane) {
  for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4},
                        std::size_t{7}, std::size_t{64}, std::size_t{1021}}) {
    auto a = random_vec(n, 11 * n + 1);
    auto b = random_vec(n, 13 * n + 2);
    std::vector<double> r(n), s(n);

    ref.add(a.data(), b.data(), r.data(), n);
    lane.add(a.data(), b.data(), s.data(), n);
    CHECK(r == s);
    ref.sub(a.data(), b.data(), r.data(), n);
    lane.sub(a.data(), b.data(), s.data(), n);
    CHECK(r == s);
    ref.mul(a.data(), b.data(), r.data(), n);
    lane.mul(a.data(), b.data(), s.data(), n);
    CHECK(r == s);
    ref.div(a.data(), b.data(), r.data(), n);
    lane.div(a.data(), b.data(), s.data(), n);
    CHECK(r == s);
    ref.scale(a.data(), 1.7, r.data(), n);
    lane.scale(a.data(), 1.7, s.data(), n);
    CHECK(r == s);
    ref.add_const(a.data(), -0.3, r.data(), n);
    lane.add_const(a.data(), -0.3, s.data(), n);
    CHECK(r == s);

    r = b;
    s = b;
    ref.axpy(0.37, a.data(), r.data(), n);
    lane.axpy(0.37, a.data(), s.data(), n);
    CHECK(r == s);
  }
}

}  // namespace

TEST_CASE("scalar lane is self-consistent") {
  check_lane_equivalence(targen::simd::scalar_kernels(), targen::simd::scalar_kernels());
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 lane matches scalar bitwise") {
  if (!targen::simd::cpu_has_avx2()) {
    MESSAGE("CPU lacks AVX2; skipping");
    return;
  }
  check_lane_equivalence(targen::simd::scalar_kernels(), targen::simd::avx2_kernels());
}
#endif

#if defined(__aarch64__)
TEST_CASE("neon lane matches scalar bitwise") {
  check_lane_equivalence(targen::simd::scalar_kernels(), targen::simd::neon_kernels());
}
#endif

TEST_CASE("matmul identical across lanes") {
  const std::size_t m = 17, k = 23, n = 31;
  auto a = random_vec(m * k, 5);
  auto b = random_vec(k * n, 6);
  std::vector<double> c_scalar(m * n, 0.0), c_lane(m * n, 0.0);

  targen::simd::select("scalar");
  targen::simd::matmul_acc(a.data(), b.data(), c_scalar.data(), m, k, n);

  targen::simd::select("auto");
  targen::simd::matmul_acc(a.data(), b.data(), c_lane.data(), m, k, n);
  CHECK(c_scalar == c_lane);

  // Reference: plain triple loop, same accumulation order.
  std::vector<double> c_ref(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < n; ++j) c_ref[i * n + j] += a[i * k + p] * b[p * n + j];
  CHECK(c_scalar == c_ref);
}

TEST_CASE("lane selection reports a name") {
  targen::simd::select("auto");
  CHECK(!targen::simd::active_name().empty());
}
