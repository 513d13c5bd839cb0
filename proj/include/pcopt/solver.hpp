#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcopt/expr.hpp"
#include "pcopt/nlp.hpp"

namespace pcopt {

struct SolveOptions {
  std::size_t max_iters = 500;
  double grad_tol = 1e-8;
  double feas_tol = 1e-8;
  std::vector<double> initial_point;  // empty: the zero vector
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  std::size_t al_outer_iters = 20;

  /// Throws InputError on non-positive tolerances or growth <= 1.
  void validate() const;
};

struct KKTReport {
  double stationarity = 0.0;     // |grad F + sum u grad G + sum v grad H|
  double feasibility = 0.0;      // max(G_i^+, |H_j|)
  double complementarity = 0.0;  // max |u_i G_i|
  double dual_sign = 0.0;        // max(0, -min u)
};

struct SolveResult {
  std::vector<double> a;
  std::vector<double> u;
  std::vector<double> v;
  double objective = 0.0;  // F(a) in minimization form
  KKTReport kkt;
  std::size_t iterations = 0;
  bool converged = false;
  /// Objective after every accepted quasi-Newton step (starting value first).
  /// For constrained solves, the augmented Lagrangian values of all inner runs.
  std::vector<double> history;
};

/// BFGS with backtracking Armijo line search (halving, sufficient decrease
/// 1e-4). Converged when |grad F| <= grad_tol (1 + |grad F(start)|).
/// Throws NumericError if F or its gradient is not finite at the start.
SolveResult minimize_unconstrained(const Nlp& nlp, const SolveOptions& opts);

/// Augmented Lagrangian (Powell-Hestenes-Rockafellar) outer loop around
/// minimize_unconstrained. Falls back to the unconstrained solver when the
/// problem has no constraints.
SolveResult minimize_constrained(const Nlp& nlp, const SolveOptions& opts);

/// Dispatches on whether the problem has constraints.
SolveResult solve(const Nlp& nlp, const SolveOptions& opts);

KKTReport kkt_residual(const Nlp& nlp, std::span<const double> a, std::span<const double> u,
                       std::span<const double> v);

/// F(a*) - min_a [F + u* G + v* H], the inner minimum taken locally from a*.
/// Zero for unconstrained problems. Throws SolveError if the inner solve does
/// not converge or the Lagrangian is unbounded below.
double dual_gap(const Nlp& nlp, const SolveResult& result, const SolveOptions& opts = {});

enum class StationaryKind { minimum, maximum, saddle, degenerate };

std::string_view stationary_kind_name(StationaryKind kind);

struct StationaryPoint {
  StationaryKind kind = StationaryKind::degenerate;
  std::array<double, 2> eigenvalues{};  // ascending
  double product = 0.0;                 // eigenvalue product (det J)
  double dh = 0.0;                      // h'(x)
};

/// Classify a stationary point of f + v h in one variable through the
/// bordered matrix J = [[f'' + v h'', h'], [h', 0]], second derivatives by
/// central differences of the exact first derivative (step 1e-5).
/// Throws InputError if |f'(x) + v h'(x)| > 1e-6 or more than one variable
/// appears.
StationaryPoint classify_stationary_point(const Expression& f, const Expression& h, double x, double v);

}  // namespace pcopt
