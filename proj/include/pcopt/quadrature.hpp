#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pcopt/orthopoly.hpp"

namespace pcopt {

/// Nodes and probability weights for a p-dimensional expectation.
/// Nodes are stored column-wise: coords[d][q] is coordinate d of node q.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<std::vector<double>> coords, std::vector<double> weights);

  std::size_t dimension() const noexcept { return coords_.size(); }
  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<std::vector<double>>& coords() const noexcept { return coords_; }
  std::span<const double> coord(std::size_t d) const { return coords_.at(d); }
  std::vector<double> node(std::size_t q) const;

  /// Nodes per dimension for tensor rules (empty if not a tensor rule).
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }

 private:
  friend QuadratureRule tensor_rule(std::span<const QuadratureRule> rules);
  std::vector<std::vector<double>> coords_;
  std::vector<double> weights_;
  std::vector<std::size_t> shape_;
};

/// Eigenvalues (unsorted) of a symmetric tridiagonal matrix by implicit-shift
/// QL, together with the first component of each normalized eigenvector.
struct TridiagonalEigen {
  std::vector<double> eigenvalues;
  std::vector<double> first_components;
};
TridiagonalEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> offdiag,
                                   double tol = 1e-14, int max_sweeps = 50);

/// n-point Gauss rule for the family's weight (Golub-Welsch), nodes ascending.
QuadratureRule gauss_rule(PolynomialFamily family, std::size_t n);

/// Full tensor product of 1-dimensional rules; the first dimension varies
/// slowest.
QuadratureRule tensor_rule(std::span<const QuadratureRule> rules);

/// Tensor rule with n nodes per dimension of the basis.
QuadratureRule tensor_gauss_rule(std::span<const PolynomialFamily> families, std::size_t n);

/// Default node count per dimension for expansion order r.
inline std::size_t default_node_count(unsigned order) { return 2 * static_cast<std::size_t>(order) + 2; }

using PointFunction = std::function<double(std::span<const double>)>;

/// sum_q w_q fn(node_q), ascending q. Throws NumericError naming the node
/// when fn is not finite there.
double integrate(const PointFunction& fn, const QuadratureRule& rule);

}  // namespace pcopt
