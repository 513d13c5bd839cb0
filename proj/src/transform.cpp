#include "pcopt/transform.hpp"

#include <string>

#include "pcopt/error.hpp"
#include "pcopt/simd.hpp"

namespace pcopt {

std::string_view mode_name(ConstraintMode mode) {
  return mode == ConstraintMode::expectation ? "expectation" : "collocation";
}

ConstraintMode mode_from_name(std::string_view name) {
  if (name == "expectation") return ConstraintMode::expectation;
  if (name == "collocation") return ConstraintMode::collocation;
  throw InputError("unknown constraint mode '" + std::string(name) + "'");
}

DeterministicProblem::DeterministicProblem(const StochasticProblem& prob, Basis basis, QuadratureRule rule,
                                           ConstraintMode mode)
    : d_(prob.d()),
      p_(prob.p()),
      basis_(std::move(basis)),
      rule_(std::move(rule)),
      mode_(mode),
      sign_(prob.sense == Sense::maximize ? -1.0 : 1.0),
      objective_(prob.sense == Sense::maximize ? -prob.objective : prob.objective, prob.identifiers()) {
  prob.validate();
  if (basis_.dimension() != p_) {
    throw InputError("transform: basis has " + std::to_string(basis_.dimension()) + " random dimensions, problem has " +
                     std::to_string(p_));
  }
  if (rule_.dimension() != p_) throw InputError("transform: quadrature rule dimension does not match the problem");
  for (std::size_t j = 0; j < p_; ++j) {
    if (basis_.families()[j] != prob.random[j].dist.family()) {
      throw InputError("transform: basis family for '" + prob.random[j].name + "' does not match its distribution");
    }
  }
  const std::size_t Q = rule_.size();
  psi_ = basis_.eval_table(rule_.coords());
  lambda_.resize(p_ * Q);
  for (std::size_t j = 0; j < p_; ++j) {
    for (std::size_t q = 0; q < Q; ++q) lambda_[j * Q + q] = standardize(prob.random[j].dist, rule_.coord(j)[q]);
  }
  const auto ids = prob.identifiers();
  for (const auto& g : prob.inequalities) ineq_.emplace_back(g, ids);
  for (const auto& h : prob.equalities) eq_.emplace_back(h, ids);
}

std::size_t DeterministicProblem::num_inequalities() const {
  return mode_ == ConstraintMode::expectation ? ineq_.size() : ineq_.size() * rule_.size();
}

std::size_t DeterministicProblem::num_equalities() const {
  return mode_ == ConstraintMode::expectation ? eq_.size() : eq_.size() * rule_.size();
}

void DeterministicProblem::expand(std::span<const double> a, std::vector<double>& x) const {
  if (a.size() != dim()) {
    throw InputError("expected " + std::to_string(dim()) + " coefficients, got " + std::to_string(a.size()));
  }
  const auto& K = simd::kernels();
  const std::size_t Q = rule_.size();
  const std::size_t T = terms();
  x.assign(d_ * Q, 0.0);
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t k = 0; k < T; ++k) {
      const double c = a[i * T + k];
      if (c != 0.0) K.axpy(c, psi_.data() + k * Q, x.data() + i * Q, Q);
    }
  }
}

void DeterministicProblem::project(const std::vector<double>& adj_x, std::span<double> out) const {
  const auto& K = simd::kernels();
  const std::size_t Q = rule_.size();
  const std::size_t T = terms();
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t k = 0; k < T; ++k) out[i * T + k] = K.dot(adj_x.data() + i * Q, psi_.data() + k * Q, Q);
  }
}

std::vector<const double*> DeterministicProblem::columns(const std::vector<double>& x) const {
  const std::size_t Q = rule_.size();
  std::vector<const double*> cols;
  cols.reserve(d_ + p_);
  for (std::size_t i = 0; i < d_; ++i) cols.push_back(x.data() + i * Q);
  for (std::size_t j = 0; j < p_; ++j) cols.push_back(lambda_.data() + j * Q);
  return cols;
}

std::vector<double> DeterministicProblem::node_values(std::span<const double> a) const {
  std::vector<double> x;
  expand(a, x);
  return x;
}

Expansion DeterministicProblem::expansion(std::span<const double> a) const {
  if (a.size() != dim()) throw InputError("expansion: coefficient count mismatch");
  return Expansion(basis_, d_, std::vector<double>(a.begin(), a.end()));
}

double DeterministicProblem::objective(std::span<const double> a) const {
  std::vector<double> x;
  expand(a, x);
  Tape::Workspace ws;
  const auto vals = objective_.forward(columns(x), rule_.size(), ws);
  return simd::kernels().dot(rule_.weights().data(), vals.data(), rule_.size());
}

double DeterministicProblem::gradient(std::span<const double> a, std::span<double> g) const {
  if (g.size() != dim()) throw InputError("gradient: output length mismatch");
  const std::size_t Q = rule_.size();
  std::vector<double> x;
  expand(a, x);
  Tape::Workspace ws;
  const auto vals = objective_.forward(columns(x), Q, ws);
  const double F = simd::kernels().dot(rule_.weights().data(), vals.data(), Q);
  std::vector<double> adj(d_ * Q, 0.0);
  std::vector<double*> adj_cols(d_ + p_, nullptr);
  for (std::size_t i = 0; i < d_; ++i) adj_cols[i] = adj.data() + i * Q;
  objective_.reverse(rule_.weights(), adj_cols, ws);
  project(adj, g);
  return F;
}

void DeterministicProblem::constraints(std::span<const double> a, std::span<double> g, std::span<double> h) const {
  if (g.size() != num_inequalities() || h.size() != num_equalities()) {
    throw InputError("constraints: output length mismatch");
  }
  const std::size_t Q = rule_.size();
  const auto& K = simd::kernels();
  std::vector<double> x;
  expand(a, x);
  const auto cols = columns(x);
  Tape::Workspace ws;
  auto run = [&](const std::vector<Tape>& tapes, std::span<double> out) {
    for (std::size_t i = 0; i < tapes.size(); ++i) {
      const auto vals = tapes[i].forward(cols, Q, ws);
      if (mode_ == ConstraintMode::expectation) {
        out[i] = K.dot(rule_.weights().data(), vals.data(), Q);
      } else {
        for (std::size_t q = 0; q < Q; ++q) out[i * Q + q] = vals[q];
      }
    }
  };
  run(ineq_, g);
  run(eq_, h);
}

void DeterministicProblem::constraint_vjp(std::span<const double> a, std::span<const double> u,
                                          std::span<const double> v, std::span<double> out) const {
  if (u.size() != num_inequalities() || v.size() != num_equalities() || out.size() != dim()) {
    throw InputError("constraint_vjp: length mismatch");
  }
  const std::size_t Q = rule_.size();
  const auto& K = simd::kernels();
  std::vector<double> x;
  expand(a, x);
  const auto cols = columns(x);
  std::vector<double> adj(d_ * Q, 0.0);
  std::vector<double*> adj_cols(d_ + p_, nullptr);
  for (std::size_t i = 0; i < d_; ++i) adj_cols[i] = adj.data() + i * Q;
  std::vector<double> seed(Q);
  Tape::Workspace ws;
  auto run = [&](const std::vector<Tape>& tapes, std::span<const double> mult) {
    for (std::size_t i = 0; i < tapes.size(); ++i) {
      bool any = false;
      if (mode_ == ConstraintMode::expectation) {
        if (mult[i] == 0.0) continue;
        K.scale(mult[i], rule_.weights().data(), seed.data(), Q);
        any = true;
      } else {
        for (std::size_t q = 0; q < Q; ++q) {
          seed[q] = mult[i * Q + q];
          any = any || seed[q] != 0.0;
        }
      }
      if (!any) continue;
      tapes[i].forward(cols, Q, ws);
      tapes[i].reverse(seed, adj_cols, ws);
    }
  };
  run(ineq_, u);
  run(eq_, v);
  project(adj, out);
}

QuadratureRule problem_rule(const StochasticProblem& prob, std::size_t nodes_per_dim) {
  const auto fams = prob.families();
  return tensor_gauss_rule(fams, nodes_per_dim);
}

DeterministicProblem fixed_parameter_problem(const StochasticProblem& prob, std::span<const double> xi) {
  if (xi.size() != prob.p()) throw InputError("fixed_parameter_problem: expected one value per random parameter");
  std::vector<std::vector<double>> coords;
  for (double v : xi) coords.push_back({v});
  return DeterministicProblem(prob, Basis(prob.families(), 0), QuadratureRule(std::move(coords), {1.0}));
}

}  // namespace pcopt
