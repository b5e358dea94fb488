//
// Project Targen
// SPDX-License-Identifier: Apache-2.0
//

#ifndef TARGEN_SIMD_KERNELS_HPP_
#define TARGEN_SIMD_KERNELS_HPP_

#include <cstddef>
#include <string_view>

namespace targen::simd {

// Dense f64 inner-loop kernels. Every SIMD variant must produce results
// bitwise identical to the scalar reference: vectorization runs across
// output elements, reductions keep scalar order, and no FMA contraction is
// allowed. Equivalence tests assert exact equality.
struct Kernels {
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*div)(const double* a, const double* b, double* out, std::size_t n);
  void (*scale)(const double* a, double c, double* out, std::size_t n);
  void (*add_const)(const double* a, double c, double* out, std::size_t n);
  // y[i] += a * x[i]; the matmul inner loop.
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const Kernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_kernels();
#endif
#if defined(__aarch64__)
const Kernels& neon_kernels();
#endif

// Active kernel table. Selected once at first use: TARGEN_SIMD env var
// ("scalar", "avx2", "neon", "auto"), defaulting to the widest supported.
const Kernels& active();
std::string_view active_name();
// Force a lane by name; "auto" re-runs detection. Throws UsageError on an
// unknown or unsupported lane. Intended for tests and the CLI manifest.
void select(std::string_view name);
bool cpu_has_avx2();

// C[m,n] += A[m,k] * B[k,n], all row-major contiguous. Accumulates over k in
// ascending order for every output element regardless of lane.
void matmul_acc(const double* a, const double* b, double* c, std::size_t m,
                std::size_t k, std::size_t n);

// Scalar-order reductions (shared by all lanes; order-sensitive).
double sum_seq(const double* a, std::size_t n);
double max_seq(const double* a, std::size_t n);

}  // namespace targen::simd

#endif  // TARGEN_SIMD_KERNELS_HPP_
