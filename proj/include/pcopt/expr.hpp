#pragma once

// Arithmetic expressions over named real variables: the carrier for
// objectives and constraints.
//
// Grammar accepted by parse_expression:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' UNSIGNED_INT)?
//   atom   := NUMBER | IDENT | '(' expr ')'

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace pcopt {

enum class ExprKind { constant, variable, add, subtract, multiply, divide, negate, power };

class Expression {
 public:
  struct Node;

  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression variable(std::string name);
  static Expression power(Expression base, unsigned exponent);

  ExprKind kind() const;
  double value() const;              // constant nodes
  const std::string& name() const;   // variable nodes
  unsigned exponent() const;         // power nodes
  const Expression& lhs() const;     // binary, negate and power nodes
  const Expression& rhs() const;     // binary nodes

  bool is_constant(double v) const { return kind() == ExprKind::constant && value() == v; }

  /// Structural equality (same tree shape, names, constants and exponents).
  bool same_as(const Expression& other) const;

  /// Every identifier referenced by the tree.
  std::set<std::string> identifiers() const;

  /// Number of nodes.
  std::size_t size() const;

  const Node* node() const noexcept { return node_.get(); }

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend Expression make_node(ExprKind, Expression, Expression);
  std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);

using Environment = std::map<std::string, double, std::less<>>;

/// Value under env. Throws NumericError on division by zero, InputError on
/// a missing binding.
double eval_expr(const Expression& e, const Environment& env);

/// Partial derivative with respect to `wrt`, by forward differentiation of
/// the tree.
double grad_expr(const Expression& e, std::string_view wrt, const Environment& env);

/// Text in the grammar above; parse_expression(to_string(e)) reproduces the
/// tree for any parsed expression.
std::string to_string(const Expression& e);

/// Parse a complete expression. Positions in errors are reported relative to
/// (line, first_column).
Expression parse_expression(std::string_view text, std::size_t line = 1, std::size_t first_column = 1);

}  // namespace pcopt
