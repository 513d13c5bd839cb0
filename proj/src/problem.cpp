#include "pcopt/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "pcopt/error.hpp"

namespace pcopt {

Distribution Distribution::normal(double mean, double std) {
  if (!std::isfinite(mean) || !std::isfinite(std)) throw InputError("normal distribution parameters must be finite");
  if (!(std > 0.0)) throw InputError("normal distribution requires std > 0");
  return {Kind::normal, mean, std};
}

Distribution Distribution::uniform(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InputError("uniform distribution bounds must be finite");
  if (!(hi > lo)) throw InputError("uniform distribution requires hi > lo");
  return {Kind::uniform, lo, hi};
}

double Distribution::mean() const { return kind == Kind::normal ? a : 0.5 * (a + b); }

double Distribution::variance() const { return kind == Kind::normal ? b * b : (b - a) * (b - a) / 12.0; }

PolynomialFamily Distribution::family() const {
  return kind == Kind::normal ? PolynomialFamily::hermite : PolynomialFamily::legendre;
}

double standardize(const Distribution& dist, double xi) {
  if (dist.kind == Distribution::Kind::normal) return dist.a + dist.b * xi;
  if (std::fabs(xi) > 1.0) throw InputError("standardize: uniform variable outside [-1, 1]");
  return dist.a + (dist.b - dist.a) * (xi + 1.0) / 2.0;
}

std::vector<PolynomialFamily> StochasticProblem::families() const {
  std::vector<PolynomialFamily> out;
  for (const auto& r : random) out.push_back(r.dist.family());
  return out;
}

std::vector<std::string> StochasticProblem::identifiers() const {
  std::vector<std::string> out = decisions;
  for (const auto& r : random) out.push_back(r.name);
  return out;
}

void StochasticProblem::validate() const {
  if (decisions.empty()) throw InputError("problem has no decision variables");
  if (random.empty()) throw InputError("problem has no random parameters");
  const auto names = identifiers();
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) throw InputError("duplicate identifier '" + name + "'");
  }
  auto check = [&](const Expression& e, const std::string& where) {
    for (const auto& id : e.identifiers()) {
      if (!seen.count(id)) throw InputError("undeclared identifier '" + id + "' in " + where);
    }
  };
  check(objective, "objective");
  for (std::size_t i = 0; i < inequalities.size(); ++i) check(inequalities[i], "inequality " + std::to_string(i + 1));
  for (std::size_t j = 0; j < equalities.size(); ++j) check(equalities[j], "equality " + std::to_string(j + 1));
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// A slice of a source line with its 1-based starting column.
struct Piece {
  std::string_view text;
  std::size_t column;
};

Piece trim(Piece p) {
  std::size_t b = 0;
  std::size_t e = p.text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(p.text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(p.text[e - 1]))) --e;
  return {p.text.substr(b, e - b), p.column + b};
}

double constant_value(Piece p, std::size_t line) {
  const Expression e = parse_expression(p.text, line, p.column);
  if (!e.identifiers().empty()) throw ParseError("distribution parameters must be numeric constants", line, p.column);
  return eval_expr(e, {});
}

class ProblemParser {
 public:
  explicit ProblemParser(std::string_view text) : text_(text) {}

  StochasticProblem parse() {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      std::string_view line = text_.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      const auto hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      handle_line(trim({line, 1}), line_no);
      if (end == text_.size()) break;
      start = end + 1;
    }
    finish(line_no);
    return std::move(prob_);
  }

 private:
  enum class Section { none, decision, random, objective, constraints };

  void handle_line(Piece p, std::size_t line) {
    if (p.text.empty()) return;
    if (p.text.front() == '[') {
      if (p.text.back() != ']') throw ParseError("unterminated section header", line, p.column);
      const std::string name(trim({p.text.substr(1, p.text.size() - 2), p.column + 1}).text);
      Section next;
      if (name == "decision") {
        next = Section::decision;
      } else if (name == "random") {
        next = Section::random;
      } else if (name == "objective") {
        next = Section::objective;
      } else if (name == "constraints") {
        next = Section::constraints;
      } else {
        throw ParseError("unknown section '" + name + "'", line, p.column);
      }
      if (!seen_sections_.insert(next).second) throw ParseError("duplicate section [" + name + "]", line, p.column);
      section_ = next;
      return;
    }
    switch (section_) {
      case Section::none:
        throw ParseError("content before the first section header", line, p.column);
      case Section::decision:
        decision_line(p, line);
        break;
      case Section::random:
        random_line(p, line);
        break;
      case Section::objective:
        objective_line(p, line);
        break;
      case Section::constraints:
        constraint_line(p, line);
        break;
    }
  }

  void declare(const std::string& name, std::size_t line, std::size_t column) {
    if (!is_identifier(name)) throw ParseError("invalid identifier '" + name + "'", line, column);
    if (!declared_.insert(name).second) throw ParseError("duplicate identifier '" + name + "'", line, column);
  }

  void decision_line(Piece p, std::size_t line) {
    std::size_t pos = 0;
    while (pos <= p.text.size()) {
      std::size_t comma = p.text.find(',', pos);
      if (comma == std::string_view::npos) comma = p.text.size();
      const Piece item = trim({p.text.substr(pos, comma - pos), p.column + pos});
      if (item.text.empty()) {
        // A trailing comma continues the list on the next line.
        if (comma != p.text.size() || pos == 0) throw ParseError("expected an identifier", line, item.column);
      } else {
        declare(std::string(item.text), line, item.column);
        prob_.decisions.emplace_back(item.text);
      }
      pos = comma + 1;
    }
  }

  void random_line(Piece p, std::size_t line) {
    const auto tilde = p.text.find('~');
    if (tilde == std::string_view::npos) throw ParseError("expected 'name ~ distribution(a, b)'", line, p.column);
    const Piece name = trim({p.text.substr(0, tilde), p.column});
    const Piece rhs = trim({p.text.substr(tilde + 1), p.column + tilde + 1});
    const auto open = rhs.text.find('(');
    if (open == std::string_view::npos || rhs.text.back() != ')') {
      throw ParseError("expected 'normal(mean, std)' or 'uniform(lo, hi)'", line, rhs.column);
    }
    const std::string kind(trim({rhs.text.substr(0, open), rhs.column}).text);
    const std::string_view args = rhs.text.substr(open + 1, rhs.text.size() - open - 2);
    const std::size_t args_col = rhs.column + open + 1;
    const auto comma = args.find(',');
    if (comma == std::string_view::npos || args.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("distribution takes exactly two parameters", line, args_col);
    }
    const double first = constant_value(trim({args.substr(0, comma), args_col}), line);
    const double second = constant_value(trim({args.substr(comma + 1), args_col + comma + 1}), line);
    Distribution dist;
    try {
      if (kind == "normal") {
        dist = Distribution::normal(first, second);
      } else if (kind == "uniform") {
        dist = Distribution::uniform(first, second);
      } else {
        throw ParseError("unknown distribution '" + kind + "'", line, rhs.column);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(std::string("invalid distribution: ") + e.what(), line, rhs.column);
    }
    declare(std::string(name.text), line, name.column);
    prob_.random.push_back({std::string(name.text), dist});
  }

  Expression checked_expression(Piece p, std::size_t line) {
    Expression e = parse_expression(p.text, line, p.column);
    pending_.push_back({e, std::string(p.text), line, p.column});
    return e;
  }

  void objective_line(Piece p, std::size_t line) {
    if (have_objective_) throw ParseError("only one objective is allowed", line, p.column);
    std::size_t word = 0;
    while (word < p.text.size() && std::isalpha(static_cast<unsigned char>(p.text[word]))) ++word;
    const std::string_view sense = p.text.substr(0, word);
    if (sense == "minimize") {
      prob_.sense = Sense::minimize;
    } else if (sense == "maximize") {
      prob_.sense = Sense::maximize;
    } else {
      throw ParseError("objective must start with 'minimize' or 'maximize'", line, p.column);
    }
    const Piece body = trim({p.text.substr(word), p.column + word});
    if (body.text.empty()) throw ParseError("missing objective expression", line, body.column);
    prob_.objective = checked_expression(body, line);
    have_objective_ = true;
  }

  void constraint_line(Piece p, std::size_t line) {
    struct Rel {
      std::string_view token;
      int kind;  // 0: <=, 1: >=, 2: ==
    };
    static constexpr Rel rels[] = {{"<=", 0}, {">=", 1}, {"==", 2}};
    std::size_t at = std::string_view::npos;
    int kind = -1;
    for (const auto& r : rels) {
      const auto pos = p.text.find(r.token);
      if (pos != std::string_view::npos && (at == std::string_view::npos || pos < at)) {
        at = pos;
        kind = r.kind;
      }
    }
    if (at == std::string_view::npos) throw ParseError("constraint needs one of <=, >=, ==", line, p.column);
    const Piece lhs_text = trim({p.text.substr(0, at), p.column});
    const Piece rhs_text = trim({p.text.substr(at + 2), p.column + at + 2});
    if (lhs_text.text.empty()) throw ParseError("missing left-hand side", line, p.column);
    if (rhs_text.text.empty()) throw ParseError("missing right-hand side", line, rhs_text.column);
    const Expression lhs = checked_expression(lhs_text, line);
    const Expression rhs = checked_expression(rhs_text, line);
    Expression g;
    if (kind == 1) {
      g = lhs.is_constant(0.0) ? -rhs : (rhs.is_constant(0.0) ? -lhs : rhs - lhs);
    } else {
      g = rhs.is_constant(0.0) ? lhs : lhs - rhs;
    }
    (kind == 2 ? prob_.equalities : prob_.inequalities).push_back(g);
  }

  void finish(std::size_t last_line) {
    if (prob_.decisions.empty()) throw ParseError("missing [decision] section or it is empty", last_line, 1);
    if (prob_.random.empty()) throw ParseError("missing [random] section or it is empty", last_line, 1);
    if (!have_objective_) throw ParseError("missing [objective] section", last_line, 1);
    for (const auto& pe : pending_) {
      for (const auto& id : pe.expr.identifiers()) {
        if (!declared_.count(id)) {
          throw ParseError("undeclared identifier '" + id + "'", pe.line, pe.column + word_offset(pe.text, id));
        }
      }
    }
    prob_.validate();
  }

  // Offset of the first whole-word occurrence of id in text.
  static std::size_t word_offset(std::string_view text, std::string_view id) {
    auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    for (std::size_t pos = text.find(id); pos != std::string_view::npos; pos = text.find(id, pos + 1)) {
      const std::size_t end = pos + id.size();
      if ((pos == 0 || !word_char(text[pos - 1])) && (end == text.size() || !word_char(text[end]))) return pos;
    }
    return 0;
  }

  struct PendingExpr {
    Expression expr;
    std::string text;
    std::size_t line;
    std::size_t column;
  };

  std::string_view text_;
  Section section_ = Section::none;
  std::set<Section> seen_sections_;
  std::set<std::string> declared_;
  std::vector<PendingExpr> pending_;
  bool have_objective_ = false;
  StochasticProblem prob_;
};

}  // namespace

StochasticProblem parse_problem(std::string_view text) { return ProblemParser(text).parse(); }

StochasticProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()).substr(std::string(e.what()).find(": ") + 2) + " (in " + path + ")",
                     e.line(), e.column());
  }
}

}  // namespace pcopt
