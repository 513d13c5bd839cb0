#include "pcopt/pce.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcopt/error.hpp"
#include "pcopt/simd.hpp"

namespace pcopt {

std::size_t num_terms(std::size_t d, unsigned r, std::size_t p) {
  if (d == 0 || p == 0) throw InputError("num_terms: d and p must be at least 1");
  return d * total_degree_count(p, r);
}

Expansion::Expansion(Basis basis, std::size_t decisions, std::vector<double> coeffs)
    : basis_(std::move(basis)), decisions_(decisions), coeffs_(std::move(coeffs)) {
  if (decisions_ == 0) throw InputError("Expansion: at least one decision dimension is required");
  if (coeffs_.size() != decisions_ * basis_.size()) {
    throw InputError("Expansion: expected " + std::to_string(decisions_ * basis_.size()) + " coefficients, got " +
                     std::to_string(coeffs_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw NumericError("Expansion: non-finite coefficient");
  }
}

std::span<const double> Expansion::row(std::size_t i) const {
  if (i >= decisions_) throw InputError("Expansion::row: index out of range");
  return std::span<const double>(coeffs_).subspan(i * terms(), terms());
}

std::vector<double> Expansion::evaluate(std::span<const double> xi) const {
  if (xi.size() != basis_.dimension()) {
    throw InputError("Expansion::evaluate: expected a point of length " + std::to_string(basis_.dimension()) +
                     ", got " + std::to_string(xi.size()));
  }
  std::vector<double> psi(terms());
  for (std::size_t k = 0; k < terms(); ++k) psi[k] = basis_.eval(k, xi);
  std::vector<double> x(decisions_);
  const auto& K = simd::kernels();
  for (std::size_t i = 0; i < decisions_; ++i) x[i] = K.dot(coeffs_.data() + i * terms(), psi.data(), terms());
  return x;
}

Expansion Expansion::combine(std::span<const double> weights) const {
  if (weights.size() != decisions_) throw InputError("Expansion::combine: weight count mismatch");
  std::vector<double> out(terms(), 0.0);
  const auto& K = simd::kernels();
  for (std::size_t i = 0; i < decisions_; ++i) {
    if (weights[i] != 0.0) K.axpy(weights[i], coeffs_.data() + i * terms(), out.data(), terms());
  }
  return Expansion(basis_, 1, std::move(out));
}

std::vector<double> evaluate(const Expansion& exp, std::span<const double> xi) { return exp.evaluate(xi); }

std::size_t moment_node_count(unsigned order, unsigned max_k) {
  const std::size_t degree = static_cast<std::size_t>(std::max(2u, max_k)) * order;
  return degree / 2 + 1;
}

MomentSummary moments(const Expansion& exp, const QuadratureRule& rule, unsigned max_k) {
  if (rule.dimension() != exp.basis().dimension()) throw InputError("moments: rule dimension mismatch");
  const std::size_t d = exp.decisions();
  const std::size_t T = exp.terms();
  const std::size_t Q = rule.size();
  const auto& K = simd::kernels();

  MomentSummary out;
  out.mean.resize(d);
  out.std.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto row = exp.row(i);
    out.mean[i] = row[0];
    double ss = 0.0;
    for (std::size_t k = 1; k < T; ++k) ss = ss + row[k] * row[k];
    out.std[i] = std::sqrt(ss);
  }
  if (max_k < 2) return out;

  const std::vector<double> psi = exp.basis().eval_table(rule.coords());
  std::vector<double> centered(Q);
  std::vector<double> power(Q);
  out.central.assign(max_k - 1, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    // x_i - mean at every node, from the non-constant terms only.
    K.fill(0.0, centered.data(), Q);
    const auto row = exp.row(i);
    for (std::size_t k = 1; k < T; ++k) K.axpy(row[k], psi.data() + k * Q, centered.data(), Q);
    for (unsigned order = 2; order <= max_k; ++order) {
      K.powi(centered.data(), order, power.data(), Q);
      out.central[order - 2][i] = K.dot(rule.weights().data(), power.data(), Q);
    }
    const double var = out.std[i] * out.std[i];
    if (std::fabs(out.central[0][i] - var) > 1e-10 * std::max(1.0, var)) {
      throw NumericError("moments: quadrature rule under-resolves the expansion (second moment " +
                         std::to_string(out.central[0][i]) + " vs coefficient variance " + std::to_string(var) + ")");
    }
  }
  return out;
}

MomentSummary moments(const Expansion& exp, unsigned max_k) {
  const auto& fams = exp.basis().families();
  const QuadratureRule rule = tensor_gauss_rule(fams, moment_node_count(exp.basis().order(), max_k));
  return moments(exp, rule, max_k);
}

}  // namespace pcopt
