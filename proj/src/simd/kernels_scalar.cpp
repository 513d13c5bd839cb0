#include "pcopt/simd.hpp"

namespace pcopt::simd::detail {
namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void div(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}
void neg(const double* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -a[i];
}
void scale(double alpha, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}
void acc(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + x[i];
}
void dec(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] - x[i];
}
void mul_acc(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a[i] * b[i];
}
void mul_dec(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] - a[i] * b[i];
}
void div_acc(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a[i] / b[i];
}

// Left-to-right binary exponentiation; the SIMD variants replay exactly this
// multiplication sequence.
double powi_one(double x, unsigned e) {
  double result = 1.0;
  double base = x;
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

void powi(const double* x, unsigned e, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = powi_one(x[i], e);
}
void fill(double value, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = value;
}
double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = s + a[i] * b[i];
  return s;
}
double sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s = s + a[i];
  return s;
}

constexpr Kernels kScalar{Isa::scalar, add,     sub,     mul,     div,  neg,
                          scale,       axpy,    acc,     dec,     mul_acc,
                          mul_dec,     div_acc, powi,    fill,    dot,  sum};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

}  // namespace pcopt::simd::detail
