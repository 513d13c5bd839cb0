#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "pcopt/error.hpp"
#include "pcopt/problem.hpp"
#include "pcopt/quadrature.hpp"

using namespace pcopt;

namespace {

const char* kQuadratic =
    "[decision]\nx\n"
    "[random]\nlambda ~ normal(0.0, 0.1)\n"
    "[objective]\nminimize (1 + lambda)*x^2 + x\n";

// Random expression over x, y, z without division, so every point is valid.
Expression random_expr(std::mt19937_64& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  static const char* names[] = {"x", "y", "z"};
  switch (pick(gen)) {
    case 0: return Expression::constant(std::round(c(gen) * 100.0) / 100.0);
    case 1: return Expression::variable(names[gen() % 3]);
    case 2: return random_expr(gen, depth - 1) + random_expr(gen, depth - 1);
    case 3: return random_expr(gen, depth - 1) - random_expr(gen, depth - 1);
    case 4: return random_expr(gen, depth - 1) * random_expr(gen, depth - 1);
    case 5: return -random_expr(gen, depth - 1);
    default: return Expression::power(random_expr(gen, depth - 1), static_cast<unsigned>(gen() % 4));
  }
}

}  // namespace

TEST_SUITE("problem") {
  TEST_CASE("parse the random quadratic") {
    const StochasticProblem p = parse_problem(kQuadratic);
    CHECK(p.d() == 1);
    CHECK(p.p() == 1);
    CHECK(p.m() == 0);
    CHECK(p.n() == 0);
    CHECK(p.sense == Sense::minimize);
    CHECK(p.objective.same_as(parse_expression("(1+lambda)*x^2 + x")));
    CHECK(p.random[0].dist.kind == Distribution::Kind::normal);
    CHECK(p.random[0].dist.b == 0.1);
  }

  TEST_CASE("parse constraints, comments and maximize") {
    const StochasticProblem p = parse_problem(
        "# header comment\n[decision]\nx1, x2\n[random]\nu ~ uniform(-1.0, 1.0)   # trailing\n"
        "[objective]\nmaximize x1 + u*x2\n[constraints]\nx1 + x2 - 1 <= 0\nx1 >= 0\nx1 - x2 == 0\n");
    CHECK(p.sense == Sense::maximize);
    CHECK(p.m() == 2);
    CHECK(p.n() == 1);
    const Environment env{{"x1", 0.25}, {"x2", 0.5}, {"u", 0.0}};
    CHECK(eval_expr(p.inequalities[0], env) == doctest::Approx(-0.25));
    CHECK(eval_expr(p.inequalities[1], env) == doctest::Approx(-0.25));  // x1 >= 0 becomes -x1 <= 0
    CHECK(eval_expr(p.equalities[0], env) == doctest::Approx(-0.25));
  }

  TEST_CASE("input errors") {
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[random]\ny ~ normal(0, -1)\n[objective]\nminimize x\n"), InputError);
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[random]\ny ~ uniform(1, 1)\n[objective]\nminimize x\n"), InputError);
    try {
      parse_problem("[decision]\nx\n[random]\ny ~ normal(0, 1)\n[objective]\nminimize x + z\n");
      FAIL("expected an undeclared identifier error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("'z'") != std::string::npos);
      CHECK(e.line() == 6);
      CHECK(e.column() == 14);
    }
    CHECK_THROWS_AS(parse_problem("[decision]\nx, x\n[random]\ny ~ normal(0, 1)\n[objective]\nminimize x\n"), InputError);
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[random]\nx ~ normal(0, 1)\n[objective]\nminimize x\n"), InputError);
    try {
      parse_problem("[decision]\nx\n[random]\ny ~ normal(0, 1)\n[objective]\nminimize (x + \n");
      FAIL("expected a syntax error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 6);
      CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[objective]\nminimize x\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[random]\ny ~ normal(0, 1)\n[objective]\nminimize x/0\n"), InputError);
    CHECK_THROWS_AS(parse_problem("[decision]\nx\n[random]\ny ~ normal(0, 1)\n[objective]\nminimize x^-1\n"), ParseError);
  }

  TEST_CASE("load_problem names the path") {
    try {
      load_problem("/nonexistent/dir/missing.prob");
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/missing.prob") != std::string::npos);
    }
  }

  TEST_CASE("evaluation examples") {
    const Expression q = parse_expression("(1+lambda)*x^2 + x");
    CHECK(eval_expr(q, {{"x", -0.5}, {"lambda", 0.0}}) == -0.25);
    CHECK(eval_expr(parse_expression("3*x*y + 2.5 - y^2"), {{"x", 0.0}, {"y", 0.0}}) == 2.5);
    CHECK(eval_expr(parse_expression("x^0"), {{"x", 7.0}}) == 1.0);
    CHECK_THROWS_AS(eval_expr(parse_expression("1/(x-1)"), {{"x", 1.0}}), NumericError);
    CHECK_THROWS_AS(eval_expr(parse_expression("x + w"), {{"x", 1.0}}), InputError);
  }

  TEST_CASE("gradient examples") {
    CHECK(grad_expr(parse_expression("(1+lambda)*x^2 + x"), "x", {{"x", 1.0}, {"lambda", 0.0}}) == 3.0);
    CHECK(grad_expr(parse_expression("x^2"), "lambda", {{"x", 4.0}, {"lambda", 1.0}}) == 0.0);
    CHECK(grad_expr(parse_expression("x^3"), "x", {{"x", 2.0}}) == 12.0);
    CHECK(grad_expr(parse_expression("x/y"), "y", {{"x", 3.0}, {"y", 2.0}}) == doctest::Approx(-0.75));
  }

  TEST_CASE("gradients match central differences on random expressions") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
      const Expression e = random_expr(gen, 4);
      Environment env{{"x", u(gen)}, {"y", u(gen)}, {"z", u(gen)}};
      for (const char* v : {"x", "y", "z"}) {
        const double h = 1e-6;
        Environment ep = env, em = env;
        ep[v] += h;
        em[v] -= h;
        const double fd = (eval_expr(e, ep) - eval_expr(e, em)) / (2 * h);
        const double g = grad_expr(e, v, env);
        CHECK(std::fabs(g - fd) <= 1e-5 * std::max(1.0, std::fabs(g)));
      }
    }
  }

  TEST_CASE("parse -> print -> parse round-trips") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 200; ++trial) {
      const Expression e = parse_expression(to_string(random_expr(gen, 5)));
      const Expression again = parse_expression(to_string(e));
      CHECK(again.same_as(e));
    }
    for (const char* text : {"-x^2", "(-x)^2", "a - (b - c)", "a/(b*c)", "-(a + b)*c", "2^3^1", "1e-3*x"}) {
      if (std::string(text) == "2^3^1") {
        CHECK_THROWS_AS(parse_expression(text), ParseError);
        continue;
      }
      const Expression e = parse_expression(text);
      CHECK(parse_expression(to_string(e)).same_as(e));
    }
  }

  TEST_CASE("standardize") {
    CHECK(standardize(Distribution::normal(0.0, 0.1), 1.0) == doctest::Approx(0.1));
    CHECK(standardize(Distribution::uniform(0.0, 2.0), 0.0) == 1.0);
    CHECK(standardize(Distribution::normal(1.0, 0.2), -1.0) == doctest::Approx(0.8));
    CHECK_THROWS_AS(standardize(Distribution::uniform(0.0, 2.0), 1.5), InputError);
  }

  TEST_CASE("standardize pushes the weight forward to the declared law") {
    for (const Distribution& d : {Distribution::normal(1.5, 0.3), Distribution::normal(-2.0, 4.0),
                                  Distribution::uniform(-3.0, 5.0), Distribution::uniform(0.1, 0.2)}) {
      const QuadratureRule r = gauss_rule(d.family(), 6);
      const double m = integrate([&](std::span<const double> t) { return standardize(d, t[0]); }, r);
      const double v = integrate([&](std::span<const double> t) { return std::pow(standardize(d, t[0]) - m, 2); }, r);
      CHECK(std::fabs(m - d.mean()) <= 1e-10 * std::max(1.0, std::fabs(d.mean())));
      CHECK(std::fabs(v - d.variance()) <= 1e-10 * std::max(1.0, d.variance()));
    }
  }
}
