#include "pcopt/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "pcopt/error.hpp"

namespace pcopt {

struct Expression::Node {
  ExprKind kind = ExprKind::constant;
  double value = 0.0;
  std::string name;
  unsigned exponent = 0;
  // Null for absent children; default construction would recurse into the
  // shared zero node.
  Expression a{std::shared_ptr<const Node>()};
  Expression b{std::shared_ptr<const Node>()};
};

namespace {

const std::shared_ptr<const Expression::Node>& zero_node() {
  static const auto node = std::make_shared<const Expression::Node>();
  return node;
}

}  // namespace

Expression::Expression() : node_(zero_node()) {}

Expression make_node(ExprKind kind, Expression a, Expression b) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expression(std::move(n));
}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::constant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::variable;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::power(Expression base, unsigned exponent) {
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::power;
  n->exponent = exponent;
  n->a = std::move(base);
  return Expression(std::move(n));
}

ExprKind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
unsigned Expression::exponent() const { return node_->exponent; }
const Expression& Expression::lhs() const { return node_->a; }
const Expression& Expression::rhs() const { return node_->b; }

bool Expression::same_as(const Expression& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case ExprKind::constant:
      return value() == other.value();
    case ExprKind::variable:
      return name() == other.name();
    case ExprKind::negate:
      return lhs().same_as(other.lhs());
    case ExprKind::power:
      return exponent() == other.exponent() && lhs().same_as(other.lhs());
    default:
      return lhs().same_as(other.lhs()) && rhs().same_as(other.rhs());
  }
}

namespace {

void collect_identifiers(const Expression& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::constant:
      return;
    case ExprKind::variable:
      out.insert(e.name());
      return;
    case ExprKind::negate:
    case ExprKind::power:
      collect_identifiers(e.lhs(), out);
      return;
    default:
      collect_identifiers(e.lhs(), out);
      collect_identifiers(e.rhs(), out);
  }
}

}  // namespace

std::set<std::string> Expression::identifiers() const {
  std::set<std::string> out;
  collect_identifiers(*this, out);
  return out;
}

std::size_t Expression::size() const {
  switch (kind()) {
    case ExprKind::constant:
    case ExprKind::variable:
      return 1;
    case ExprKind::negate:
    case ExprKind::power:
      return 1 + lhs().size();
    default:
      return 1 + lhs().size() + rhs().size();
  }
}

Expression operator+(const Expression& a, const Expression& b) { return make_node(ExprKind::add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return make_node(ExprKind::subtract, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return make_node(ExprKind::multiply, a, b); }
Expression operator/(const Expression& a, const Expression& b) {
  if (b.is_constant(0.0)) throw InputError("division by the constant 0");
  return make_node(ExprKind::divide, a, b);
}
Expression operator-(const Expression& a) { return make_node(ExprKind::negate, a, Expression()); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double lookup(const Environment& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) throw InputError("no value bound for identifier '" + name + "'");
  return it->second;
}

double ipow(double x, unsigned e) {
  double result = 1.0;
  double base = x;
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

// (value, derivative) pair.
struct Dual {
  double v;
  double d;
};

Dual forward(const Expression& e, std::string_view wrt, const Environment& env) {
  switch (e.kind()) {
    case ExprKind::constant:
      return {e.value(), 0.0};
    case ExprKind::variable:
      return {lookup(env, e.name()), e.name() == wrt ? 1.0 : 0.0};
    case ExprKind::add: {
      const Dual a = forward(e.lhs(), wrt, env);
      const Dual b = forward(e.rhs(), wrt, env);
      return {a.v + b.v, a.d + b.d};
    }
    case ExprKind::subtract: {
      const Dual a = forward(e.lhs(), wrt, env);
      const Dual b = forward(e.rhs(), wrt, env);
      return {a.v - b.v, a.d - b.d};
    }
    case ExprKind::multiply: {
      const Dual a = forward(e.lhs(), wrt, env);
      const Dual b = forward(e.rhs(), wrt, env);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case ExprKind::divide: {
      const Dual a = forward(e.lhs(), wrt, env);
      const Dual b = forward(e.rhs(), wrt, env);
      if (b.v == 0.0) throw NumericError("division by zero");
      const double q = a.v / b.v;
      return {q, (a.d - q * b.d) / b.v};
    }
    case ExprKind::negate: {
      const Dual a = forward(e.lhs(), wrt, env);
      return {-a.v, -a.d};
    }
    case ExprKind::power: {
      const Dual a = forward(e.lhs(), wrt, env);
      const unsigned n = e.exponent();
      if (n == 0) return {1.0, 0.0};
      return {ipow(a.v, n), static_cast<double>(n) * ipow(a.v, n - 1) * a.d};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

double eval_expr(const Expression& e, const Environment& env) {
  switch (e.kind()) {
    case ExprKind::constant:
      return e.value();
    case ExprKind::variable:
      return lookup(env, e.name());
    case ExprKind::add:
      return eval_expr(e.lhs(), env) + eval_expr(e.rhs(), env);
    case ExprKind::subtract:
      return eval_expr(e.lhs(), env) - eval_expr(e.rhs(), env);
    case ExprKind::multiply:
      return eval_expr(e.lhs(), env) * eval_expr(e.rhs(), env);
    case ExprKind::divide: {
      const double num = eval_expr(e.lhs(), env);
      const double den = eval_expr(e.rhs(), env);
      if (den == 0.0) throw NumericError("division by zero");
      return num / den;
    }
    case ExprKind::negate:
      return -eval_expr(e.lhs(), env);
    case ExprKind::power:
      return ipow(eval_expr(e.lhs(), env), e.exponent());
  }
  return 0.0;
}

double grad_expr(const Expression& e, std::string_view wrt, const Environment& env) {
  return forward(e, wrt, env).d;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength of the printed form.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kFactor = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::pair<std::string, int> render(const Expression& e) {
  auto wrap = [](const std::pair<std::string, int>& part, int min_prec) {
    return part.second >= min_prec ? part.first : "(" + part.first + ")";
  };
  switch (e.kind()) {
    case ExprKind::constant:
      if (std::signbit(e.value())) return {"-" + format_number(-e.value()), kFactor};
      return {format_number(e.value()), kAtom};
    case ExprKind::variable:
      return {e.name(), kAtom};
    case ExprKind::add:
    case ExprKind::subtract: {
      const char* op = e.kind() == ExprKind::add ? " + " : " - ";
      return {wrap(render(e.lhs()), kSum) + op + wrap(render(e.rhs()), kProduct), kSum};
    }
    case ExprKind::multiply:
    case ExprKind::divide: {
      const char* op = e.kind() == ExprKind::multiply ? "*" : "/";
      return {wrap(render(e.lhs()), kProduct) + op + wrap(render(e.rhs()), kFactor), kProduct};
    }
    case ExprKind::negate:
      return {"-" + wrap(render(e.lhs()), kFactor), kFactor};
    case ExprKind::power:
      return {wrap(render(e.lhs()), kAtom) + "^" + std::to_string(e.exponent()), kPower};
  }
  return {"", kAtom};
}

}  // namespace

std::string to_string(const Expression& e) { return render(e).first; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t line, std::size_t first_column)
      : text_(text), line_(line), col0_(first_column) {}

  Expression parse() {
    Expression e = parse_expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, col0_ + pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression parse_expr() {
    Expression lhs = parse_term();
    while (true) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expression parse_term() {
    Expression lhs = parse_factor();
    while (true) {
      if (accept('*')) {
        lhs = lhs * parse_factor();
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        Expression rhs = parse_factor();
        if (rhs.is_constant(0.0)) {
          pos_ = at;
          fail("division by the constant 0");
        }
        lhs = lhs / rhs;
      } else {
        return lhs;
      }
    }
  }

  Expression parse_factor() {
    if (accept('-')) return -parse_factor();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_atom();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent after '^'");
      unsigned exponent = 0;
      auto res = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
      if (res.ec != std::errc()) {
        pos_ = start;
        fail("exponent out of range");
      }
      return Expression::power(std::move(base), exponent);
    }
    return base;
  }

  Expression parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      return Expression::variable(std::string(text_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expression::constant(value);
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, std::size_t line, std::size_t first_column) {
  return ExpressionParser(text, line, first_column).parse();
}

}  // namespace pcopt
