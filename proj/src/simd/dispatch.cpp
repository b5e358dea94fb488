//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdlib>
#include <string>

#include "targen/errors.hpp"
#include "targen/simd/kernels.hpp"

namespace targen::simd {
namespace {

const Kernels* g_active = nullptr;
std::string g_name = "scalar";

void apply(std::string_view name) {
  if (name == "scalar") {
    g_active = &scalar_kernels();
    g_name = "scalar";
    return;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") {
    if (!cpu_has_avx2()) throw UsageError("TARGEN_SIMD=avx2: CPU lacks AVX2");
    g_active = &avx2_kernels();
    g_name = "avx2";
    return;
  }
#endif
#if defined(__aarch64__)
  if (name == "neon") {
    g_active = &neon_kernels();
    g_name = "neon";
    return;
  }
#endif
  if (name == "auto") {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) {
      g_active = &avx2_kernels();
      g_name = "avx2";
      return;
    }
#endif
#if defined(__aarch64__)
    g_active = &neon_kernels();
    g_name = "neon";
    return;
#endif
    g_active = &scalar_kernels();
    g_name = "scalar";
    return;
  }
  throw UsageError("unknown SIMD lane '" + std::string(name) + "'");
}

void init_once() {
  if (g_active != nullptr) return;
  const char* env = std::getenv("TARGEN_SIMD");
  apply(env != nullptr && *env != '\0' ? std::string_view(env) : "auto");
}

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Kernels& active() {
  init_once();
  return *g_active;
}

std::string_view active_name() {
  init_once();
  return g_name;
}

void select(std::string_view name) { apply(name); }

void matmul_acc(const double* a, const double* b, double* c, std::size_t m,
                std::size_t k, std::size_t n) {
  const Kernels& kr = active();
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      if (aip != 0.0) kr.axpy(aip, b + p * n, crow, n);
    }
  }
}

}  // namespace targen::simd
