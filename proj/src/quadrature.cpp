#include "pcopt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcopt/error.hpp"
#include "pcopt/simd.hpp"

namespace pcopt {

QuadratureRule::QuadratureRule(std::vector<std::vector<double>> coords, std::vector<double> weights)
    : coords_(std::move(coords)), weights_(std::move(weights)) {
  if (coords_.empty()) throw InputError("QuadratureRule: dimension must be at least 1");
  if (weights_.empty()) throw InputError("QuadratureRule: at least one node is required");
  for (const auto& c : coords_) {
    if (c.size() != weights_.size()) throw InputError("QuadratureRule: node and weight counts differ");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) throw InputError("QuadratureRule: weights must be positive");
  }
  shape_.assign(1, weights_.size());
  if (coords_.size() != 1) shape_.clear();
}

std::vector<double> QuadratureRule::node(std::size_t q) const {
  std::vector<double> point(dimension());
  for (std::size_t d = 0; d < dimension(); ++d) point[d] = coords_[d].at(q);
  return point;
}

TridiagonalEigen tridiagonal_eigen(std::vector<double> d, std::vector<double> e, double tol, int max_sweeps) {
  const int n = static_cast<int>(d.size());
  if (n == 0) throw InputError("tridiagonal_eigen: empty matrix");
  if (static_cast<int>(e.size()) != n - 1) throw InputError("tridiagonal_eigen: off-diagonal must have n-1 entries");
  e.push_back(0.0);
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= tol * dd) break;
      }
      if (m != l) {
        if (sweeps++ == max_sweeps) {
          throw NumericError("tridiagonal_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
        }
        // Wilkinson-style shift from the leading 2x2 block.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool deflated = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return {std::move(d), std::move(z)};
}

QuadratureRule gauss_rule(PolynomialFamily family, std::size_t n) {
  if (n == 0) throw InputError("gauss_rule: node count must be at least 1");
  const Recurrence rec = recurrence_coeffs(family, n);
  std::vector<double> offdiag(n - 1);
  for (std::size_t k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(rec.beta[k]);
  const TridiagonalEigen eig = tridiagonal_eigen(rec.alpha, offdiag);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return eig.eigenvalues[a] < eig.eigenvalues[b]; });
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = eig.eigenvalues[order[i]];
    const double z = eig.first_components[order[i]];
    weights[i] = rec.beta[0] * z * z;
  }

  // Both supported weights are even; impose the exact mirror symmetry that
  // the eigen-solve only reproduces to rounding.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -x;
    nodes[j] = x;
    weights[i] = w;
    weights[j] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;

  const auto& K = simd::kernels();
  const double mass = K.sum(weights.data(), n);
  for (double& w : weights) w /= mass;
  // Division leaves the sum a few ulps off 1. Push the residual into the
  // central weight(s), keeping the mirror symmetry, until the summed mass is 1.
  for (int pass = 0; pass < 4; ++pass) {
    const double residual = 1.0 - K.sum(weights.data(), n);
    if (residual == 0.0) break;
    if (n % 2 == 1) {
      weights[n / 2] += residual;
    } else {
      weights[n / 2 - 1] += 0.5 * residual;
      weights[n / 2] += 0.5 * residual;
    }
  }

  return QuadratureRule({std::move(nodes)}, std::move(weights));
}

QuadratureRule tensor_rule(std::span<const QuadratureRule> rules) {
  if (rules.empty()) throw InputError("tensor_rule: at least one factor rule is required");
  std::size_t total = 1;
  std::size_t dims = 0;
  for (const auto& r : rules) {
    total *= r.size();
    dims += r.dimension();
  }
  std::vector<std::vector<double>> coords(dims, std::vector<double>(total));
  std::vector<double> weights(total, 1.0);

  // Row-major enumeration: the last factor varies fastest.
  std::size_t stride = total;
  std::size_t dim_offset = 0;
  for (const auto& r : rules) {
    const std::size_t n = r.size();
    stride /= n;
    for (std::size_t q = 0; q < total; ++q) {
      const std::size_t local = (q / stride) % n;
      weights[q] *= r.weights()[local];
      for (std::size_t d = 0; d < r.dimension(); ++d) coords[dim_offset + d][q] = r.coords()[d][local];
    }
    dim_offset += r.dimension();
  }
  QuadratureRule out(std::move(coords), std::move(weights));
  out.shape_.clear();
  for (const auto& r : rules) {
    if (r.shape().empty()) {
      out.shape_.clear();
      break;
    }
    out.shape_.insert(out.shape_.end(), r.shape().begin(), r.shape().end());
  }
  return out;
}

QuadratureRule tensor_gauss_rule(std::span<const PolynomialFamily> families, std::size_t n) {
  std::vector<QuadratureRule> factors;
  factors.reserve(families.size());
  for (PolynomialFamily f : families) factors.push_back(gauss_rule(f, n));
  return tensor_rule(factors);
}

double integrate(const PointFunction& fn, const QuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const std::vector<double> point = rule.node(q);
    const double value = fn(point);
    if (!std::isfinite(value)) {
      std::string where;
      for (std::size_t d = 0; d < point.size(); ++d) where += (d ? ", " : "") + std::to_string(point[d]);
      throw NumericError("integrand is not finite at quadrature node " + std::to_string(q) + " (" + where + ")");
    }
    total = total + rule.weights()[q] * value;
  }
  return total;
}

}  // namespace pcopt
