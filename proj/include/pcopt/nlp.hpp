#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace pcopt {

/// Smooth finite-dimensional problem: min F(a) s.t. G(a) <= 0, H(a) = 0.
/// Implementations must be safe to call concurrently from several threads.
class Nlp {
 public:
  virtual ~Nlp() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t num_inequalities() const { return 0; }
  virtual std::size_t num_equalities() const { return 0; }

  virtual double objective(std::span<const double> a) const = 0;

  /// Writes grad F into g and returns F.
  virtual double gradient(std::span<const double> a, std::span<double> g) const = 0;

  virtual void constraints(std::span<const double> /*a*/, std::span<double> /*g*/, std::span<double> /*h*/) const {}

  /// out = sum_i u_i grad G_i(a) + sum_j v_j grad H_j(a).
  virtual void constraint_vjp(std::span<const double> /*a*/, std::span<const double> /*u*/,
                              std::span<const double> /*v*/, std::span<double> out) const {
    for (double& o : out) o = 0.0;
  }
};

/// Unconstrained problem from callables, for tests and ad-hoc objectives.
class FunctionNlp : public Nlp {
 public:
  using Value = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionNlp(std::size_t dim, Value f, Gradient g) : dim_(dim), f_(std::move(f)), g_(std::move(g)) {}

  std::size_t dim() const override { return dim_; }
  double objective(std::span<const double> a) const override { return f_(a); }
  double gradient(std::span<const double> a, std::span<double> g) const override {
    g_(a, g);
    return f_(a);
  }

 private:
  std::size_t dim_;
  Value f_;
  Gradient g_;
};

}  // namespace pcopt
