// AVX2 variants. Compiled with -mavx2 only; reached through runtime dispatch
// after a CPUID check, so nothing here may be called on a non-AVX2 host.

#include <immintrin.h>

#include "pcopt/simd.hpp"

namespace pcopt::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

template <class Op>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) {
    _mm_store_sd(out + i, _mm256_castpd256_pd128(op(_mm256_set1_pd(a[i]), _mm256_set1_pd(b[i]))));
  }
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); });
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); });
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); });
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); });
}

void neg(const double* a, double* out, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_xor_pd(_mm256_loadu_pd(a + i), sign));
  }
  for (; i < n; ++i) out[i] = -a[i];
}

void scale(double alpha, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = alpha * x[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void acc(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = y[i] + x[i];
}

void dec(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = y[i] - x[i];
}

void mul_acc(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a[i] * b[i];
}

void mul_dec(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] - a[i] * b[i];
}

void div_acc(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), q));
  }
  for (; i < n; ++i) y[i] = y[i] + a[i] / b[i];
}

void powi(const double* x, unsigned e, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d result = _mm256_set1_pd(1.0);
    __m256d base = _mm256_loadu_pd(x + i);
    for (unsigned k = e; k != 0;) {
      if (k & 1u) result = _mm256_mul_pd(result, base);
      k >>= 1;
      if (k != 0) base = _mm256_mul_pd(base, base);
    }
    _mm256_storeu_pd(out + i, result);
  }
  for (; i < n; ++i) {
    double result = 1.0;
    double base = x[i];
    for (unsigned k = e; k != 0;) {
      if (k & 1u) result = result * base;
      k >>= 1;
      if (k != 0) base = base * base;
    }
    out[i] = result;
  }
}

void fill(double value, double* out, std::size_t n) {
  const __m256d v = _mm256_set1_pd(value);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) _mm256_storeu_pd(out + i, v);
  for (; i < n; ++i) out[i] = value;
}

double dot(const double* a, const double* b, std::size_t n) {
  alignas(32) double prod[kLanes];
  double s = 0.0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_store_pd(prod, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    s = s + prod[0];
    s = s + prod[1];
    s = s + prod[2];
    s = s + prod[3];
  }
  for (; i < n; ++i) s = s + a[i] * b[i];
  return s;
}

double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = s + a[i];
  return s;
}

constexpr Kernels kAvx2{Isa::avx2, add,     sub,     mul,     div,  neg,
                        scale,     axpy,    acc,     dec,     mul_acc,
                        mul_dec,   div_acc, powi,    fill,    dot,  sum};

}  // namespace

const Kernels& avx2_kernels() { return kAvx2; }

}  // namespace pcopt::simd::detail
