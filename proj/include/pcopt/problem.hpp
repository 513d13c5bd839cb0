#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pcopt/expr.hpp"
#include "pcopt/orthopoly.hpp"

namespace pcopt {

struct Distribution {
  enum class Kind { normal, uniform };
  Kind kind = Kind::normal;
  double a = 0.0;  // normal: mean, uniform: lower bound
  double b = 1.0;  // normal: std, uniform: upper bound

  /// Validating constructors: std > 0, hi > lo, all finite.
  static Distribution normal(double mean, double std);
  static Distribution uniform(double lo, double hi);

  double mean() const;
  double variance() const;

  /// Polynomial family whose weight is the standardized law.
  PolynomialFamily family() const;
};

/// Map a standardized variable to the physical parameter:
/// normal: mean + std * xi; uniform: lo + (hi - lo) (xi + 1) / 2, |xi| <= 1.
double standardize(const Distribution& dist, double xi);

struct RandomParameter {
  std::string name;
  Distribution dist;
};

enum class Sense { minimize, maximize };

struct StochasticProblem {
  std::vector<std::string> decisions;
  std::vector<RandomParameter> random;
  Expression objective;
  Sense sense = Sense::minimize;
  std::vector<Expression> inequalities;  // g(x, lambda) <= 0
  std::vector<Expression> equalities;    // h(x, lambda) == 0

  std::size_t d() const noexcept { return decisions.size(); }
  std::size_t p() const noexcept { return random.size(); }
  std::size_t m() const noexcept { return inequalities.size(); }
  std::size_t n() const noexcept { return equalities.size(); }

  std::vector<PolynomialFamily> families() const;

  /// Decision names followed by random parameter names.
  std::vector<std::string> identifiers() const;

  /// Throws InputError unless identifiers are distinct and every expression
  /// only references declared names.
  void validate() const;
};

/// Parse the sectioned text format. Errors carry line and column.
StochasticProblem parse_problem(std::string_view text);

/// Read and parse a file; the path appears in I/O error messages.
StochasticProblem load_problem(const std::string& path);

}  // namespace pcopt
