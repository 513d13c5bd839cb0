#include "pcopt/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcopt/error.hpp"
#include "pcopt/simd.hpp"

namespace pcopt {

std::string_view family_name(PolynomialFamily family) {
  switch (family) {
    case PolynomialFamily::hermite:
      return "hermite";
    case PolynomialFamily::legendre:
      return "legendre";
  }
  return "unknown";
}

PolynomialFamily family_from_name(std::string_view name) {
  if (name == "hermite") return PolynomialFamily::hermite;
  if (name == "legendre") return PolynomialFamily::legendre;
  throw InputError("unknown polynomial family '" + std::string(name) + "'");
}

Recurrence recurrence_coeffs(PolynomialFamily family, std::size_t n) {
  if (n == 0) throw InputError("recurrence_coeffs: n must be at least 1");
  Recurrence rec{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  rec.beta[0] = 1.0;
  switch (family) {
    case PolynomialFamily::hermite:
      for (std::size_t k = 1; k < n; ++k) rec.beta[k] = static_cast<double>(k);
      break;
    case PolynomialFamily::legendre:
      for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        rec.beta[k] = kk / (4.0 * kk - 1.0);
      }
      break;
    default:
      throw InputError("recurrence_coeffs: unsupported family");
  }
  return rec;
}

namespace {

struct OrthonormalSteps {
  std::vector<double> alpha;
  std::vector<double> sqrt_beta;      // sqrt(beta_k)
  std::vector<double> inv_sqrt_beta;  // 1 / sqrt(beta_k)
};

OrthonormalSteps orthonormal_steps(PolynomialFamily family, std::size_t max_degree) {
  Recurrence rec = recurrence_coeffs(family, max_degree + 1);
  OrthonormalSteps steps;
  steps.alpha = std::move(rec.alpha);
  steps.sqrt_beta.resize(rec.beta.size());
  steps.inv_sqrt_beta.resize(rec.beta.size());
  for (std::size_t k = 0; k < rec.beta.size(); ++k) {
    steps.sqrt_beta[k] = std::sqrt(rec.beta[k]);
    steps.inv_sqrt_beta[k] = 1.0 / steps.sqrt_beta[k];
  }
  return steps;
}

}  // namespace

double eval_orthonormal(PolynomialFamily family, std::size_t k, double t) {
  if (!std::isfinite(t)) throw NumericError("eval_orthonormal: non-finite argument");
  if (k == 0) return 1.0;
  const OrthonormalSteps steps = orthonormal_steps(family, k);
  // Same operation order as eval_orthonormal_table.
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    double next = (t - steps.alpha[j]) * cur;
    if (j > 0) next = next + (-steps.sqrt_beta[j]) * prev;
    next = steps.inv_sqrt_beta[j + 1] * next;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> eval_orthonormal_table(PolynomialFamily family, std::size_t max_degree,
                                           std::span<const double> t) {
  const std::size_t n = t.size();
  for (double v : t) {
    if (!std::isfinite(v)) throw NumericError("eval_orthonormal_table: non-finite argument");
  }
  std::vector<double> out((max_degree + 1) * n);
  const auto& K = simd::kernels();
  K.fill(1.0, out.data(), n);
  if (max_degree == 0 || n == 0) return out;
  const OrthonormalSteps steps = orthonormal_steps(family, max_degree);
  std::vector<double> shifted(n);
  for (std::size_t j = 0; j < max_degree; ++j) {
    double* next = out.data() + (j + 1) * n;
    const double* cur = out.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) shifted[i] = t[i] - steps.alpha[j];
    K.mul(shifted.data(), cur, next, n);
    if (j > 0) K.axpy(-steps.sqrt_beta[j], out.data() + (j - 1) * n, next, n);
    K.scale(steps.inv_sqrt_beta[j + 1], next, next, n);
  }
  return out;
}

unsigned total_degree(const MultiIndex& idx) { return std::accumulate(idx.begin(), idx.end(), 0u); }

std::vector<MultiIndex> total_degree_indices(std::size_t p, unsigned r) {
  if (p == 0) throw InputError("total_degree_indices: dimension must be at least 1");
  std::vector<MultiIndex> out;
  out.reserve(total_degree_count(p, r));
  // Compositions of each degree in decreasing lexicographic order.
  for (unsigned degree = 0; degree <= r; ++degree) {
    MultiIndex idx(p, 0);
    idx[0] = degree;
    while (true) {
      out.push_back(idx);
      // Move one unit from the rightmost movable position (excluding the
      // last slot) one step right, collecting the tail into that next slot.
      std::size_t pos = p - 1;
      while (pos > 0 && idx[pos - 1] == 0) --pos;
      if (pos == 0) break;
      if (p == 1) break;
      const unsigned tail = idx[p - 1];
      idx[p - 1] = 0;
      idx[pos - 1] -= 1;
      idx[pos] = tail + 1;
    }
  }
  return out;
}

std::size_t total_degree_count(std::size_t p, unsigned r) {
  // C(r + p, p) via the multiplicative formula; each partial product is an
  // exact binomial coefficient.
  std::size_t result = 1;
  for (std::size_t i = 1; i <= p; ++i) {
    result = result * (r + i) / i;
  }
  return result;
}

Basis::Basis(std::vector<PolynomialFamily> families, unsigned order)
    : families_(std::move(families)), order_(order) {
  if (families_.empty()) throw InputError("Basis: at least one random dimension is required");
  indices_ = total_degree_indices(families_.size(), order_);
}

std::size_t Basis::position(const MultiIndex& idx) const {
  auto it = std::find(indices_.begin(), indices_.end(), idx);
  if (it == indices_.end()) throw InputError("multi-index not in basis");
  return static_cast<std::size_t>(it - indices_.begin());
}

double Basis::eval(const MultiIndex& idx, std::span<const double> t) const {
  if (t.size() != dimension() || idx.size() != dimension()) {
    throw InputError("Basis::eval: expected a point of length " + std::to_string(dimension()) + ", got " +
                     std::to_string(t.size()));
  }
  double value = 1.0;
  for (std::size_t d = 0; d < dimension(); ++d) {
    if (idx[d] != 0) value *= eval_orthonormal(families_[d], idx[d], t[d]);
  }
  return value;
}

std::vector<double> Basis::eval_table(std::span<const std::vector<double>> columns) const {
  if (columns.size() != dimension()) throw InputError("Basis::eval_table: wrong number of coordinate columns");
  const std::size_t n = columns.empty() ? 0 : columns[0].size();
  std::vector<std::vector<double>> univariate;
  univariate.reserve(dimension());
  for (std::size_t d = 0; d < dimension(); ++d) {
    if (columns[d].size() != n) throw InputError("Basis::eval_table: ragged coordinate columns");
    univariate.push_back(eval_orthonormal_table(families_[d], order_, columns[d]));
  }
  const auto& K = simd::kernels();
  std::vector<double> out(size() * n);
  for (std::size_t k = 0; k < size(); ++k) {
    double* row = out.data() + k * n;
    K.fill(1.0, row, n);
    for (std::size_t d = 0; d < dimension(); ++d) {
      const unsigned deg = indices_[k][d];
      if (deg != 0) K.mul(row, univariate[d].data() + deg * n, row, n);
    }
  }
  return out;
}

double eval_multivariate(const Basis& basis, const MultiIndex& idx, std::span<const double> t) {
  if (idx.size() != basis.dimension()) throw InputError("eval_multivariate: multi-index length mismatch");
  if (total_degree(idx) > basis.order()) throw InputError("eval_multivariate: multi-index not in basis");
  return basis.eval(idx, t);
}

}  // namespace pcopt
