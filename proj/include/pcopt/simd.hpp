#pragma once

// Data-parallel double-precision kernels used by the batch evaluators.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant selected at runtime.
// Variants are required to be bitwise identical to the scalar reference:
//   - elementwise kernels perform exactly one IEEE operation per lane, in the
//     same order as the scalar loop (no FMA contraction anywhere);
//   - reductions (dot, sum) accumulate in ascending index order, so a SIMD
//     variant may vectorize the products but never reassociates the sum.
// This is what keeps solver iterates reproducible across machines.

#include <cstddef>
#include <string_view>

namespace pcopt::simd {

enum class Isa { scalar, avx2, neon };

struct Kernels {
  Isa isa;
  // out[i] = a[i] op b[i]
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*div)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = -a[i]
  void (*neg)(const double* a, double* out, std::size_t n);
  // out[i] = alpha * x[i]
  void (*scale)(double alpha, const double* x, double* out, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] += x[i] / y[i] -= x[i]
  void (*acc)(const double* x, double* y, std::size_t n);
  void (*dec)(const double* x, double* y, std::size_t n);
  // y[i] += a[i] * b[i] / y[i] -= a[i] * b[i]
  void (*mul_acc)(const double* a, const double* b, double* y, std::size_t n);
  void (*mul_dec)(const double* a, const double* b, double* y, std::size_t n);
  // y[i] += a[i] / b[i]
  void (*div_acc)(const double* a, const double* b, double* y, std::size_t n);
  // out[i] = x[i]^e by binary exponentiation (e = 0 gives 1)
  void (*powi)(const double* x, unsigned e, double* out, std::size_t n);
  void (*fill)(double value, double* out, std::size_t n);
  // sum_i a[i] * b[i] and sum_i a[i], ascending i.
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
};

/// Kernels for the currently selected ISA.
const Kernels& kernels();

/// Kernels for a specific ISA; throws if the ISA is not compiled in or the
/// CPU lacks it.
const Kernels& kernels(Isa isa);

bool isa_available(Isa isa);

/// The ISA chosen at startup: the best available, unless overridden by the
/// PCOPT_SIMD environment variable (scalar | avx2 | neon | auto).
Isa default_isa();

/// Process-wide override, mainly for equivalence tests.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa);

namespace detail {
const Kernels& scalar_kernels();
#if defined(PCOPT_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif
#if defined(PCOPT_HAVE_NEON)
const Kernels& neon_kernels();
#endif
}  // namespace detail

}  // namespace pcopt::simd
