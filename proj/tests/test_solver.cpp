#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "pcopt/builtin.hpp"
#include "pcopt/error.hpp"
#include "pcopt/solver.hpp"
#include "pcopt/transform.hpp"

using namespace pcopt;

namespace {

// Deterministic problem from a text body with a dummy random parameter.
DeterministicProblem deterministic(const std::string& body) {
  const auto p = parse_problem("[random]\nunused ~ normal(0, 1)\n" + body);
  return fixed_parameter_problem(p, std::vector<double>{0.0});
}

SolveOptions start_at(std::vector<double> x) {
  SolveOptions o;
  o.initial_point = std::move(x);
  return o;
}

// Accepted steps never raise F beyond the rounding noise the line search
// tolerates near a minimizer (64 ulps of max(1, |F|)).
bool non_increasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(h[i - 1]));
    if (h[i] > h[i - 1] + noise) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("unconstrained examples") {
    const auto sq = deterministic("[decision]\nx\n[objective]\nminimize x^2\n");
    const SolveResult r = minimize_unconstrained(sq, start_at({5.0}));
    CHECK(r.converged);
    CHECK(std::fabs(r.a[0]) < 1e-6);
    CHECK(non_increasing(r.history));

    const auto him = fixed_parameter_problem(himmelblau_example(1).problem, std::vector<double>{0.0});
    const auto& minima = himmelblau_reference_minima();
    for (std::size_t e = 0; e < 4; ++e) {
      const auto& s = himmelblau_starts()[e];
      const SolveResult h = solve(him, start_at({s[0], s[1]}));
      CHECK(h.converged);
      CHECK(std::fabs(h.a[0] - minima[e][0]) < 1e-3);
      CHECK(std::fabs(h.a[1] - minima[e][1]) < 1e-3);
      CHECK(non_increasing(h.history));
    }
  }

  TEST_CASE("BFGS solves strictly convex quadratics within dim + 5 iterations") {
    std::mt19937_64 gen(17);
    std::normal_distribution<double> nd;
    for (std::size_t n = 1; n <= 10; ++n) {
      for (int rep = 0; rep < 5; ++rep) {
        // A = B^T B + I, b random; f = x'Ax/2 - b'x.
        std::vector<double> B(n * n), A(n * n, 0.0), b(n), x0(n);
        for (double& v : B) v = nd(gen);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) A[i * n + j] += B[k * n + i] * B[k * n + j];
          }
          A[i * n + i] += 1.0;
          b[i] = nd(gen);
          x0[i] = 3.0 * nd(gen);
        }
        FunctionNlp f(
            n,
            [&](std::span<const double> x) {
              double s = 0.0;
              for (std::size_t i = 0; i < n; ++i) {
                double ax = 0.0;
                for (std::size_t j = 0; j < n; ++j) ax += A[i * n + j] * x[j];
                s += 0.5 * x[i] * ax - b[i] * x[i];
              }
              return s;
            },
            [&](std::span<const double> x, std::span<double> g) {
              for (std::size_t i = 0; i < n; ++i) {
                double ax = 0.0;
                for (std::size_t j = 0; j < n; ++j) ax += A[i * n + j] * x[j];
                g[i] = ax - b[i];
              }
            });
        std::vector<double> g0(n);
        f.gradient(x0, g0);
        double g0n = 0.0;
        for (double v : g0) g0n += v * v;
        const SolveResult r = minimize_unconstrained(f, start_at(x0));
        CHECK(r.converged);
        CHECK(r.iterations <= n + 5);
        CHECK(r.kkt.stationarity <= 1e-8 * (1.0 + std::sqrt(g0n)));
        CHECK(non_increasing(r.history));
      }
    }
  }

  TEST_CASE("constrained analytic examples") {
    const auto c1 = deterministic("[decision]\nx\n[objective]\nminimize x^2\n[constraints]\n1 - x <= 0\n");
    const SolveResult r1 = solve(c1, {});
    CHECK(r1.converged);
    CHECK(r1.a[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r1.u[0] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(r1.kkt.complementarity < 1e-6);
    CHECK(std::fabs(dual_gap(c1, r1)) < 1e-6);

    const auto c2 = deterministic("[decision]\nx, y\n[objective]\nminimize x^2 + y^2\n[constraints]\nx + y - 1 == 0\n");
    const SolveResult r2 = solve(c2, {});
    CHECK(r2.converged);
    CHECK(r2.a[0] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r2.a[1] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r2.v[0] == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(r2.kkt.complementarity < 1e-6);
    CHECK(std::fabs(dual_gap(c2, r2)) < 1e-6);
  }

  TEST_CASE("KKT residual examples") {
    const auto c1 = deterministic("[decision]\nx\n[objective]\nminimize x^2\n[constraints]\n1 - x <= 0\n");
    const KKTReport k = kkt_residual(c1, std::vector<double>{1.0}, std::vector<double>{2.0}, {});
    CHECK(k.stationarity < 1e-10);
    CHECK(k.feasibility < 1e-10);
    CHECK(k.complementarity < 1e-10);
    CHECK(k.dual_sign == 0.0);
    const KKTReport neg = kkt_residual(c1, std::vector<double>{1.0}, std::vector<double>{-0.5}, {});
    CHECK(neg.dual_sign == 0.5);
    const auto sq = deterministic("[decision]\nx\n[objective]\nminimize x^2\n");
    CHECK(kkt_residual(sq, std::vector<double>{0.0}, {}, {}).stationarity == 0.0);
    CHECK_THROWS_AS(kkt_residual(c1, std::vector<double>{1.0}, {}, {}), InputError);
  }

  TEST_CASE("dual gap edge cases") {
    const auto sq = deterministic("[decision]\nx\n[objective]\nminimize x^2\n");
    const SolveResult r = solve(sq, start_at({1.0}));
    CHECK(dual_gap(sq, r) == 0.0);
    const auto nc = deterministic("[decision]\nx\n[objective]\nminimize (x^2 - 1)^2\n[constraints]\nx - 0.5 <= 0\n");
    const SolveResult rn = solve(nc, start_at({0.2}));
    CHECK(rn.converged);
    CHECK(dual_gap(nc, rn) >= -1e-8);
    // The Lagrangian of a saddle problem has no minimum.
    const auto sad = deterministic("[decision]\nx, y\n[objective]\nminimize x*y\n[constraints]\nx - y == 0\n");
    SolveResult fake;
    fake.a = {0.0, 0.0};
    fake.v = {1.0};
    fake.u = {};
    CHECK_THROWS_AS(dual_gap(sad, fake), SolveError);
  }

  TEST_CASE("stationary point classification") {
    const auto f2 = parse_expression("x^2"), h1 = parse_expression("x - 1");
    const StationaryPoint s = classify_stationary_point(f2, h1, 1.0, -2.0);
    CHECK(s.kind == StationaryKind::saddle);
    CHECK(s.product == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(s.eigenvalues[0] < 0.0);
    CHECK(s.eigenvalues[1] > 0.0);
    CHECK(classify_stationary_point(parse_expression("x^4"), h1, 1.0, -4.0).kind == StationaryKind::saddle);
    CHECK(classify_stationary_point(f2, parse_expression("x^2 - 1"), 0.0, 3.0).kind == StationaryKind::degenerate);
    CHECK_THROWS_AS(classify_stationary_point(f2, h1, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(classify_stationary_point(parse_expression("x*y"), h1, 1.0, 0.0), InputError);
  }

  TEST_CASE("bordered product equals -(h')^2 for random constraints") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 100; ++t) {
      auto draw = [&] { return std::round(1000.0 * u(gen)) / 1000.0; };
      const double c1 = draw(), c2 = draw(), c3 = draw(), x = draw();
      const Expression f = parse_expression(std::to_string(c1) + "*x^4 + x^2");
      const Expression h = parse_expression(std::to_string(c2) + "*x^3 + " + std::to_string(c3) + "*x");
      const double dh = 3 * c2 * x * x + c3;
      if (std::fabs(dh) <= 1e-3) continue;
      const double df = 4 * c1 * x * x * x + 2 * x;
      const double v = -df / dh;
      const StationaryPoint s = classify_stationary_point(f, h, x, v);
      CHECK(s.product < 0.0);
      CHECK(s.product == doctest::Approx(-dh * dh).epsilon(1e-4).scale(1.0));
    }
  }

  TEST_CASE("identical inputs give bitwise-identical iterates") {
    const auto dp = DeterministicProblem(himmelblau_example(2).problem, Basis({PolynomialFamily::hermite}, 1),
                                         problem_rule(himmelblau_example(2).problem, 4));
    const SolveOptions o = start_at(coefficient_start({-3.0, 3.0}, 2, 2));
    const SolveResult a = solve(dp, o), b = solve(dp, o);
    CHECK(a.history == b.history);
    CHECK(a.a == b.a);
  }

  TEST_CASE("options and failure reporting") {
    SolveOptions bad;
    bad.grad_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad = {};
    bad.penalty_growth = 1.0;
    CHECK_THROWS_AS(bad.validate(), InputError);

    const auto rosen = deterministic("[decision]\nx, y\n[objective]\nminimize (1 - x)^2 + 100*(y - x^2)^2\n");
    SolveOptions capped = start_at({-1.2, 1.0});
    capped.max_iters = 3;
    const SolveResult r = solve(rosen, capped);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations <= 3);
    const SolveResult full = solve(rosen, start_at({-1.2, 1.0}));
    CHECK(full.converged);
    CHECK(full.a[0] == doctest::Approx(1.0).epsilon(1e-5));

    const auto pole = deterministic("[decision]\nx\n[objective]\nminimize 1/x\n");
    CHECK_THROWS_AS(solve(pole, start_at({0.0})), NumericError);
  }
}
