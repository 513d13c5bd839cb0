#include "pcopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "pcopt/error.hpp"
#include "pcopt/rng.hpp"

namespace pcopt {

double estimate_lipschitz(const Expression& f, const std::vector<std::string>& decisions,
                          const std::vector<Environment>& parameter_bindings, std::span<const double> lo,
                          std::span<const double> hi, std::size_t samples, std::uint64_t seed) {
  const std::size_t d = decisions.size();
  if (lo.size() != d || hi.size() != d) throw InputError("estimate_lipschitz: box dimension mismatch");
  for (std::size_t i = 0; i < d; ++i) {
    if (!(hi[i] > lo[i])) throw InputError("estimate_lipschitz: degenerate interval for '" + decisions[i] + "'");
  }
  if (parameter_bindings.empty()) throw InputError("estimate_lipschitz: at least one parameter binding is required");

  double L = 0.0;
  std::vector<double> x1(d), x2(d);
  auto grad_norm = [&](Environment& env) {
    double s = 0.0;
    for (const auto& name : decisions) {
      const double g = grad_expr(f, name, env);
      s += g * g;
    }
    return std::sqrt(s);
  };
  for (std::size_t s = 0; s < samples; ++s) {
    SampleStream stream(seed, s);
    for (std::size_t i = 0; i < d; ++i) x1[i] = lo[i] + (hi[i] - lo[i]) * 0.5 * (stream.uniform_draw() + 1.0);
    for (std::size_t i = 0; i < d; ++i) x2[i] = lo[i] + (hi[i] - lo[i]) * 0.5 * (stream.uniform_draw() + 1.0);
    Environment e1 = parameter_bindings[s % parameter_bindings.size()];
    Environment e2 = e1;
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      e1[decisions[i]] = x1[i];
      e2[decisions[i]] = x2[i];
      dist += (x1[i] - x2[i]) * (x1[i] - x2[i]);
    }
    dist = std::sqrt(dist);
    if (dist > 0.0) L = std::max(L, std::fabs(eval_expr(f, e1) - eval_expr(f, e2)) / dist);
    L = std::max(L, grad_norm(e1));
    L = std::max(L, grad_norm(e2));
  }
  return L;
}

GapBoundReport interchange_gap_bound(const StochasticProblem& prob, const QuadratureRule& rule,
                                     std::span<const double> start, const SolveOptions& opts,
                                     const GapBoundOptions& gopts) {
  prob.validate();
  const std::size_t d = prob.d();
  const std::size_t Q = rule.size();
  if (!start.empty() && start.size() != d) throw InputError("interchange_gap_bound: start point length mismatch");

  SolveOptions inner = opts;
  inner.initial_point.assign(start.begin(), start.end());

  GapBoundReport rep;
  const DeterministicProblem mean_problem(prob, Basis(prob.families(), 0), rule, gopts.mode);
  const SolveResult qres = solve(mean_problem, inner);
  if (!qres.converged) throw SolveError("interchange_gap_bound: minimizing the expectation did not converge");
  rep.q = qres.a;

  double expected_min = 0.0;
  rep.p_hat.resize(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    const auto node = rule.node(q);
    const DeterministicProblem dp = fixed_parameter_problem(prob, node);
    const SolveResult r = solve(dp, inner);
    if (!r.converged) throw SolveError("interchange_gap_bound: deterministic solve failed at node " + std::to_string(q));
    rep.p_hat[q] = r.a;
    expected_min += rule.weights()[q] * r.objective;
    double dev = 0.0;
    for (std::size_t i = 0; i < d; ++i) dev += (r.a[i] - rep.q[i]) * (r.a[i] - rep.q[i]);
    rep.weighted_deviation += rule.weights()[q] * std::sqrt(dev);
  }
  rep.observed_gap = std::fabs(expected_min - qres.objective);

  // Box hull of every minimizer, inflated by 10%, with a floor for a hull
  // that collapses to a point.
  std::vector<double> lo(rep.q), hi(rep.q);
  for (const auto& p : rep.p_hat) {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double mid = 0.5 * (lo[i] + hi[i]);
    const double half = std::max(0.55 * (hi[i] - lo[i]), 5e-4 * std::max(1.0, std::fabs(mid)));
    lo[i] = mid - half;
    hi[i] = mid + half;
  }
  std::vector<Environment> bindings(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    for (std::size_t j = 0; j < prob.p(); ++j) {
      bindings[q][prob.random[j].name] = standardize(prob.random[j].dist, rule.coord(j)[q]);
    }
  }
  rep.lipschitz_L = estimate_lipschitz(prob.objective, prob.decisions, bindings, lo, hi, gopts.lipschitz_samples,
                                       gopts.seed);
  rep.bound = rep.lipschitz_L * rep.weighted_deviation;
  if (rep.bound < rep.observed_gap - 1e-6) {
    throw NumericError("interchange bound " + std::to_string(rep.bound) + " is below the observed gap " +
                       std::to_string(rep.observed_gap) + "; an inner solve or the rule is inaccurate");
  }
  return rep;
}

ConvexityProbe convexity_probe(const std::function<double(std::span<const double>)>& F, std::size_t dim,
                               std::size_t trials, std::uint64_t seed, double radius) {
  if (trials == 0) throw InputError("convexity_probe: at least one trial is required");
  ConvexityProbe out;
  std::vector<double> b(dim), c(dim), m(dim);
  for (std::size_t t = 0; t < trials; ++t) {
    SampleStream stream(seed, t);
    for (auto& x : b) x = radius * stream.uniform_draw();
    for (auto& x : c) x = radius * stream.uniform_draw();
    double theta = stream.next_open01();
    if (theta >= 1.0) theta = 0.5;
    for (std::size_t i = 0; i < dim; ++i) m[i] = theta * b[i] + (1.0 - theta) * c[i];
    const double lhs = F(m);
    const double rhs = theta * F(b) + (1.0 - theta) * F(c);
    const double excess = lhs - rhs;
    if (excess > 1e-10 * std::max(1.0, std::fabs(rhs))) ++out.violations;
    out.worst = std::max(out.worst, excess);
  }
  return out;
}

}  // namespace pcopt
