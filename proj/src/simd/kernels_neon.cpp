// NEON (aarch64) variants. Two lanes per vector; same bitwise contract as the
// AVX2 file. vfmaq_f64 is deliberately not used.

#include <arm_neon.h>

#include "pcopt/simd.hpp"

namespace pcopt::simd::detail {
namespace {

constexpr std::size_t kLanes = 2;

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vdivq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] / b[i];
}
void neg(const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vnegq_f64(vld1q_f64(a + i)));
  for (; i < n; ++i) out[i] = -a[i];
}
void scale(double alpha, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}
void acc(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = y[i] + x[i];
}
void dec(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(y + i, vsubq_f64(vld1q_f64(y + i), vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = y[i] - x[i];
}
void mul_acc(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a[i] * b[i];
}
void mul_dec(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vsubq_f64(vld1q_f64(y + i), vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
  }
  for (; i < n; ++i) y[i] = y[i] - a[i] * b[i];
}
void div_acc(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vdivq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + a[i] / b[i];
}
void powi(const double* x, unsigned e, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    float64x2_t result = vdupq_n_f64(1.0);
    float64x2_t base = vld1q_f64(x + i);
    for (unsigned k = e; k != 0;) {
      if (k & 1u) result = vmulq_f64(result, base);
      k >>= 1;
      if (k != 0) base = vmulq_f64(base, base);
    }
    vst1q_f64(out + i, result);
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
  const float64x2_t v = vdupq_n_f64(value);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_f64(out + i, v);
  for (; i < n; ++i) out[i] = value;
}
double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    s = s + vgetq_lane_f64(prod, 0);
    s = s + vgetq_lane_f64(prod, 1);
  }
  for (; i < n; ++i) s = s + a[i] * b[i];
  return s;
}
double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = s + a[i];
  return s;
}

constexpr Kernels kNeon{Isa::neon, add,     sub,     mul,     div,  neg,
                        scale,     axpy,    acc,     dec,     mul_acc,
                        mul_dec,   div_acc, powi,    fill,    dot,  sum};

}  // namespace

const Kernels& neon_kernels() { return kNeon; }

}  // namespace pcopt::simd::detail
