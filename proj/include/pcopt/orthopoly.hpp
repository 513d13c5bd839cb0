#pragma once

// Orthonormal polynomial families for probability weights, and total-degree
// multivariate bases built from them.
//
// Conventions:
//   Hermite  - probabilists' family, weight exp(-t^2/2)/sqrt(2 pi) on R.
//   Legendre - weight 1/2 on [-1, 1].
// Both weights are probability densities, so psi_0 = 1 and
// E[psi_i psi_k] = delta_ik.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pcopt {

enum class PolynomialFamily { hermite, legendre };

std::string_view family_name(PolynomialFamily family);
PolynomialFamily family_from_name(std::string_view name);

struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[0] is the total mass of the weight (1)
};

/// First n three-term recurrence coefficients of the monic orthogonal
/// polynomials: p_{k+1}(t) = (t - alpha_k) p_k(t) - beta_k p_{k-1}(t).
Recurrence recurrence_coeffs(PolynomialFamily family, std::size_t n);

/// Degree-k orthonormal polynomial at t.
double eval_orthonormal(PolynomialFamily family, std::size_t k, double t);

/// Orthonormal polynomials of degrees 0..max_degree at every point of t.
/// Row-major: out[k * t.size() + j] = psi_k(t[j]). Uses the SIMD kernels and
/// performs the same operation sequence as eval_orthonormal.
std::vector<double> eval_orthonormal_table(PolynomialFamily family, std::size_t max_degree,
                                           std::span<const double> t);

using MultiIndex = std::vector<unsigned>;

unsigned total_degree(const MultiIndex& idx);

/// All multi-indices of length p with total degree <= r, ordered by total
/// degree, then lexicographically from the largest leading entry down:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
std::vector<MultiIndex> total_degree_indices(std::size_t p, unsigned r);

/// (r + p)! / (r! p!) without forming factorials.
std::size_t total_degree_count(std::size_t p, unsigned r);

class Basis {
 public:
  Basis(std::vector<PolynomialFamily> families, unsigned order);

  std::size_t dimension() const noexcept { return families_.size(); }
  unsigned order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<PolynomialFamily>& families() const noexcept { return families_; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  const MultiIndex& index(std::size_t k) const { return indices_.at(k); }

  /// Position of idx in the index set; throws if absent.
  std::size_t position(const MultiIndex& idx) const;

  /// Product of univariate orthonormal evaluations.
  double eval(const MultiIndex& idx, std::span<const double> t) const;
  double eval(std::size_t k, std::span<const double> t) const { return eval(index(k), t); }

  /// psi_k at a batch of points given per dimension (columns[dim][j]).
  /// Row-major result: out[k * npoints + j].
  std::vector<double> eval_table(std::span<const std::vector<double>> columns) const;

 private:
  std::vector<PolynomialFamily> families_;
  unsigned order_;
  std::vector<MultiIndex> indices_;
};

/// Free-function form of Basis::eval, validating idx and the point length.
double eval_multivariate(const Basis& basis, const MultiIndex& idx, std::span<const double> t);

}  // namespace pcopt
