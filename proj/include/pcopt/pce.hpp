#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcopt/orthopoly.hpp"
#include "pcopt/quadrature.hpp"

namespace pcopt {

/// Total scalar unknowns when d decision variables are expanded to order r in
/// p random dimensions: d (r+p)! / (r! p!).
std::size_t num_terms(std::size_t d, unsigned r, std::size_t p);

/// Polynomial chaos expansion of a d-dimensional decision vector:
/// x_i(xi) = sum_k coeff(i, k) psi_k(xi).
class Expansion {
 public:
  /// coeffs is row-major, d rows of basis.size() entries.
  Expansion(Basis basis, std::size_t decisions, std::vector<double> coeffs);

  const Basis& basis() const noexcept { return basis_; }
  std::size_t decisions() const noexcept { return decisions_; }
  std::size_t terms() const noexcept { return basis_.size(); }
  double coeff(std::size_t i, std::size_t k) const { return coeffs_.at(i * terms() + k); }
  std::span<const double> row(std::size_t i) const;
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  /// x(xi) for a standardized point xi of length p.
  std::vector<double> evaluate(std::span<const double> xi) const;

  /// Expansion of the linear functional sum_i weights[i] x_i.
  Expansion combine(std::span<const double> weights) const;

 private:
  Basis basis_;
  std::size_t decisions_;
  std::vector<double> coeffs_;
};

std::vector<double> evaluate(const Expansion& exp, std::span<const double> xi);

struct MomentSummary {
  std::vector<double> mean;
  std::vector<double> std;
  /// central[j][i] is the central moment of order j + 2 for decision i.
  std::vector<std::vector<double>> central;

  std::size_t max_order() const noexcept { return central.size() + 1; }
};

/// Node count per dimension that integrates polynomials of degree
/// max_k * r exactly.
std::size_t moment_node_count(unsigned order, unsigned max_k);

/// Mean and standard deviation from the coefficients; central moments of
/// order 2..max_k by quadrature of (x_i - mean_i)^k. Throws NumericError when
/// the quadrature second moment disagrees with std^2 beyond 1e-10 (rule too
/// coarse for the expansion).
MomentSummary moments(const Expansion& exp, const QuadratureRule& rule, unsigned max_k = 4);

/// Same, with a tensor Gauss rule sized by moment_node_count.
MomentSummary moments(const Expansion& exp, unsigned max_k = 4);

}  // namespace pcopt
