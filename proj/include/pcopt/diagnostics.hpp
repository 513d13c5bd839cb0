#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pcopt/expr.hpp"
#include "pcopt/problem.hpp"
#include "pcopt/quadrature.hpp"
#include "pcopt/solver.hpp"
#include "pcopt/transform.hpp"

namespace pcopt {

/// Empirical version of the interchange bound
///   |E[min_x f] - min_x E[f]| <= L * E|p_hat(lambda) - q|.
/// L is sampled, so the bound is a lower estimate of the rigorous one.
struct GapBoundReport {
  double lipschitz_L = 0.0;
  double weighted_deviation = 0.0;
  double bound = 0.0;
  double observed_gap = 0.0;
  std::vector<double> q;                   // minimizer of the expectation
  std::vector<std::vector<double>> p_hat;  // per-node minimizers
};

struct GapBoundOptions {
  std::size_t lipschitz_samples = 2000;
  std::uint64_t seed = 0;
  ConstraintMode mode = ConstraintMode::expectation;
};

/// q from the order-0 transform over `rule`, p_hat by one deterministic solve
/// per node, both started at `start`. L is estimated over the box hull of
/// {p_hat} and q inflated by 10%. Throws NumericError if the bound falls below
/// the observed gap by more than 1e-6, SolveError if an inner solve fails.
GapBoundReport interchange_gap_bound(const StochasticProblem& prob, const QuadratureRule& rule,
                                     std::span<const double> start, const SolveOptions& opts,
                                     const GapBoundOptions& gopts = {});

/// max over sampled pairs (x1, x2) in the box and parameter bindings of
/// |f(x1) - f(x2)| / |x1 - x2|, together with |grad_x f| at every sampled
/// point. Sample s draws from stream (seed, s) and uses binding s mod count,
/// so extending the sample count never lowers the estimate.
double estimate_lipschitz(const Expression& f, const std::vector<std::string>& decisions,
                          const std::vector<Environment>& parameter_bindings, std::span<const double> lo,
                          std::span<const double> hi, std::size_t samples, std::uint64_t seed);

struct ConvexityProbe {
  std::size_t violations = 0;
  double worst = 0.0;  // largest F(mix) - mix of F, clipped at 0
};

/// Midpoint-style convexity check on random (b, c, theta) in the box
/// [-radius, radius]^dim. A violation exceeds 1e-10 max(1, |rhs|).
ConvexityProbe convexity_probe(const std::function<double(std::span<const double>)>& F, std::size_t dim,
                               std::size_t trials, std::uint64_t seed, double radius);

}  // namespace pcopt
