#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pcopt/error.hpp"
#include "pcopt/orthopoly.hpp"
#include "pcopt/quadrature.hpp"

using namespace pcopt;

TEST_SUITE("orthopoly") {
  TEST_CASE("recurrence coefficients match the closed forms") {
    const Recurrence h = recurrence_coeffs(PolynomialFamily::hermite, 3);
    CHECK(h.alpha == std::vector<double>{0, 0, 0});
    CHECK(h.beta == std::vector<double>{1, 1, 2});
    const Recurrence l = recurrence_coeffs(PolynomialFamily::legendre, 3);
    CHECK(l.alpha == std::vector<double>{0, 0, 0});
    CHECK(l.beta[0] == 1.0);
    CHECK(l.beta[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(l.beta[2] == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
    const Recurrence one = recurrence_coeffs(PolynomialFamily::hermite, 1);
    CHECK(one.alpha == std::vector<double>{0});
    CHECK(one.beta == std::vector<double>{1});
    CHECK_THROWS_AS(recurrence_coeffs(PolynomialFamily::hermite, 0), InputError);
  }

  TEST_CASE("recurrence coefficients agree with numeric moment integrals") {
    std::vector<double> a, b;
    oracle::stieltjes(oracle::normal_expect, 6, a, b);
    const Recurrence h = recurrence_coeffs(PolynomialFamily::hermite, 6);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(h.alpha[k] == doctest::Approx(a[k]).epsilon(1e-8).scale(1.0));
      CHECK(h.beta[k] == doctest::Approx(b[k]).epsilon(1e-8));
    }
    oracle::stieltjes(oracle::uniform_expect, 6, a, b);
    const Recurrence l = recurrence_coeffs(PolynomialFamily::legendre, 6);
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(std::fabs(l.alpha[k] - a[k]) < 1e-10);
      CHECK(l.beta[k] == doctest::Approx(b[k]).epsilon(1e-10));
    }
  }

  TEST_CASE("orthonormal evaluation examples") {
    for (double t : {-3.0, 0.0, 0.7, 12.0}) {
      CHECK(eval_orthonormal(PolynomialFamily::hermite, 0, t) == 1.0);
      CHECK(eval_orthonormal(PolynomialFamily::legendre, 0, t) == 1.0);
    }
    CHECK(eval_orthonormal(PolynomialFamily::hermite, 2, 0.0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(eval_orthonormal(PolynomialFamily::legendre, 1, 1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  }

  TEST_CASE("recurrence evaluation matches explicit low-degree formulas") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> wide(-4.0, 4.0), unit(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double th = wide(gen), tl = unit(gen);
      for (int k = 0; k <= 3; ++k) {
        const double eh = oracle::hermite(k, th), el = oracle::legendre(k, tl);
        CHECK(std::fabs(eval_orthonormal(PolynomialFamily::hermite, k, th) - eh) <= 1e-12 * std::max(1.0, std::fabs(eh)));
        CHECK(std::fabs(eval_orthonormal(PolynomialFamily::legendre, k, tl) - el) <= 1e-12 * std::max(1.0, std::fabs(el)));
      }
    }
  }

  TEST_CASE("batch table reproduces pointwise evaluation bitwise") {
    std::vector<double> t{-2.5, -1.0, -0.1, 0.0, 0.3, 0.99, 1.7, 2.2, 3.1};
    for (auto fam : {PolynomialFamily::hermite, PolynomialFamily::legendre}) {
      const auto table = eval_orthonormal_table(fam, 6, t);
      for (std::size_t k = 0; k <= 6; ++k) {
        for (std::size_t j = 0; j < t.size(); ++j) CHECK(table[k * t.size() + j] == eval_orthonormal(fam, k, t[j]));
      }
    }
  }

  TEST_CASE("total-degree index sets") {
    const auto i12 = total_degree_indices(1, 2);
    CHECK(i12 == std::vector<MultiIndex>{{0}, {1}, {2}});
    const auto i21 = total_degree_indices(2, 1);
    CHECK(i21 == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}});
    const auto i22 = total_degree_indices(2, 2);
    CHECK(i22.size() == 6);
    CHECK(i22 == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}});
  }

  TEST_CASE("index count matches (r+p)!/(r!p!) and the ordering holds") {
    for (std::size_t p = 1; p <= 4; ++p) {
      for (unsigned r = 0; r <= 6; ++r) {
        const auto idx = total_degree_indices(p, r);
        CHECK(idx.size() == static_cast<std::size_t>(oracle::binomial(r + p, r)));
        CHECK(total_degree_count(p, r) == idx.size());
        CHECK(total_degree(idx.front()) == 0);
        for (std::size_t k = 1; k < idx.size(); ++k) {
          const unsigned da = total_degree(idx[k - 1]), db = total_degree(idx[k]);
          CHECK(db <= r);
          CHECK((da < db || (da == db && idx[k - 1] > idx[k])));
        }
      }
    }
  }

  TEST_CASE("multivariate evaluation") {
    Basis b({PolynomialFamily::hermite, PolynomialFamily::hermite}, 2);
    const std::vector<double> t{1.0, 1.0};
    CHECK(eval_multivariate(b, {0, 0}, t) == 1.0);
    CHECK(eval_multivariate(b, {1, 1}, t) == doctest::Approx(1.0));
    CHECK(eval_multivariate(b, {2, 0}, std::vector<double>{0.0, 5.0}) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK_THROWS_AS(eval_multivariate(b, {1, 1}, std::vector<double>{1.0}), InputError);
    CHECK_THROWS_AS(eval_multivariate(b, {3, 0}, t), InputError);
  }

  TEST_CASE("orthonormality to degree 4 in every family mix") {
    using F = PolynomialFamily;
    for (const auto& fams : std::vector<std::vector<F>>{{F::hermite}, {F::legendre}, {F::hermite, F::legendre}}) {
      Basis b(fams, 4);
      const QuadratureRule rule = tensor_gauss_rule(fams, 6);
      for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
          const double v = integrate([&](std::span<const double> t) { return b.eval(i, t) * b.eval(k, t); }, rule);
          CHECK(std::fabs(v - (i == k ? 1.0 : 0.0)) < 1e-12);
        }
      }
    }
  }
}
