#pragma once

// Deterministic reformulation of a stochastic problem in expansion
// coefficients. Every decision variable is expanded in the basis, the
// expressions are evaluated at the quadrature nodes in one batch, and
// expectations are weighted sums over the nodes.
//
// Coefficient layout: a[i * T + k] is coefficient k of decision i, where T is
// the basis size.

#include <cstddef>
#include <span>
#include <vector>

#include "pcopt/nlp.hpp"
#include "pcopt/orthopoly.hpp"
#include "pcopt/pce.hpp"
#include "pcopt/problem.hpp"
#include "pcopt/quadrature.hpp"
#include "pcopt/tape.hpp"

namespace pcopt {

enum class ConstraintMode { expectation, collocation };

std::string_view mode_name(ConstraintMode mode);
ConstraintMode mode_from_name(std::string_view name);

class DeterministicProblem : public Nlp {
 public:
  DeterministicProblem(const StochasticProblem& prob, Basis basis, QuadratureRule rule,
                       ConstraintMode mode = ConstraintMode::expectation);

  std::size_t dim() const override { return d_ * basis_.size(); }
  std::size_t num_inequalities() const override;
  std::size_t num_equalities() const override;

  /// Minimization form: the negated objective for maximize problems.
  double objective(std::span<const double> a) const override;
  double gradient(std::span<const double> a, std::span<double> g) const override;
  void constraints(std::span<const double> a, std::span<double> g, std::span<double> h) const override;
  void constraint_vjp(std::span<const double> a, std::span<const double> u, std::span<const double> v,
                      std::span<double> out) const override;

  /// Objective in the problem's declared sense.
  double objective_value(std::span<const double> a) const { return sign_ * objective(a); }
  double sense_sign() const noexcept { return sign_; }

  const Basis& basis() const noexcept { return basis_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  ConstraintMode mode() const noexcept { return mode_; }
  std::size_t decisions() const noexcept { return d_; }
  std::size_t terms() const noexcept { return basis_.size(); }

  Expansion expansion(std::span<const double> a) const;

  /// Decision values at every node: out[i * Q + q].
  std::vector<double> node_values(std::span<const double> a) const;

  /// Physical parameter values at every node: out[j * Q + q].
  const std::vector<double>& parameter_values() const noexcept { return lambda_; }

 private:
  void expand(std::span<const double> a, std::vector<double>& x) const;
  void project(const std::vector<double>& adj_x, std::span<double> out) const;
  std::vector<const double*> columns(const std::vector<double>& x) const;

  std::size_t d_;
  std::size_t p_;
  Basis basis_;
  QuadratureRule rule_;
  ConstraintMode mode_;
  double sign_;
  std::vector<double> psi_;     // psi_[k * Q + q]
  std::vector<double> lambda_;  // lambda_[j * Q + q]
  Tape objective_;
  std::vector<Tape> ineq_;
  std::vector<Tape> eq_;
};

/// Gauss rule with n nodes per random dimension, matching the problem's laws.
QuadratureRule problem_rule(const StochasticProblem& prob, std::size_t nodes_per_dim);

/// The problem with its random parameters frozen at standardized values xi:
/// an order-0 transform over a single node of weight 1, so the coefficient
/// vector is just the decision vector.
DeterministicProblem fixed_parameter_problem(const StochasticProblem& prob, std::span<const double> xi);

}  // namespace pcopt
