#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pcopt/error.hpp"
#include "pcopt/pce.hpp"

using namespace pcopt;

namespace {
Basis hermite1(unsigned r) { return Basis({PolynomialFamily::hermite}, r); }
}  // namespace

TEST_SUITE("pce") {
  TEST_CASE("term counts") {
    CHECK(num_terms(1, 2, 1) == 3);
    CHECK(num_terms(2, 1, 1) == 4);
    CHECK(num_terms(1, 0, 5) == 1);
    CHECK(num_terms(3, 3, 2) == 30);
    CHECK_THROWS_AS(num_terms(0, 1, 1), InputError);
  }

  TEST_CASE("evaluation") {
    const std::vector<double> xi2{2.0}, xi1{1.0};
    CHECK(Expansion(hermite1(2), 1, {4.5, 0, 0}).evaluate(xi2)[0] == 4.5);
    CHECK(Expansion(hermite1(2), 1, {0, 1, 0}).evaluate(xi2)[0] == 2.0);
    CHECK(evaluate(Expansion(hermite1(2), 1, {1, 1, 1}), xi1)[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(Expansion(hermite1(2), 1, {1, 1}), InputError);
    CHECK_THROWS_AS(Expansion(hermite1(2), 1, {1, 1, 1}).evaluate(std::vector<double>{1, 2}), InputError);
    CHECK_THROWS_AS(Expansion(hermite1(1), 1, {NAN, 0}), NumericError);
  }

  TEST_CASE("moment examples") {
    const MomentSummary m = moments(Expansion(hermite1(2), 1, {-0.505, 0.0526, -0.0105}));
    CHECK(m.mean[0] == -0.505);
    CHECK(m.std[0] == doctest::Approx(std::sqrt(0.0526 * 0.0526 + 0.0105 * 0.0105)));
    CHECK(std::fabs(m.std[0] - 0.0536) < 5e-4);

    const MomentSummary c = moments(Expansion(hermite1(3), 1, {2.0, 0, 0, 0}));
    CHECK(c.mean[0] == 2.0);
    CHECK(c.std[0] == 0.0);
    for (const auto& row : c.central) CHECK(row[0] == 0.0);

    const MomentSummary lin = moments(Expansion(hermite1(2), 1, {0, 1, 0}));
    CHECK(std::fabs(lin.central[1][0]) < 1e-14);     // third moment
    CHECK(lin.central[2][0] == doctest::Approx(3.0));  // fourth moment of N(0,1)
  }

  TEST_CASE("central moments agree with a Simpson oracle") {
    const std::vector<double> a{0.3, -0.8, 0.25};
    const MomentSummary m = moments(Expansion(hermite1(2), 1, a), 5);
    auto x = [&](double t) { return a[0] + a[1] * oracle::hermite(1, t) + a[2] * oracle::hermite(2, t); };
    for (unsigned k = 2; k <= 5; ++k) {
      const double want = oracle::normal_expect([&](double t) { return std::pow(x(t) - a[0], k); });
      CHECK(m.central[k - 2][0] == doctest::Approx(want).epsilon(1e-9).scale(1.0));
    }
    CHECK(m.central[0][0] == doctest::Approx(m.std[0] * m.std[0]).epsilon(1e-12));
  }

  TEST_CASE("under-resolved rule is rejected") {
    const Expansion e(hermite1(2), 1, {0.0, 0.0, 1.0});
    CHECK_THROWS_AS(moments(e, gauss_rule(PolynomialFamily::hermite, 1)), NumericError);
  }

  TEST_CASE("Parseval, projection and mean properties") {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> nd;
    using F = PolynomialFamily;
    for (const auto& fams : std::vector<std::vector<F>>{{F::hermite}, {F::legendre}, {F::hermite, F::legendre}}) {
      for (unsigned r = 0; r <= 3; ++r) {
        Basis b(fams, r);
        const std::size_t T = b.size();
        std::vector<double> a(2 * T);
        for (double& v : a) v = nd(gen);
        const Expansion e(b, 2, a);
        const QuadratureRule rule = tensor_gauss_rule(fams, r + 1);
        for (std::size_t i = 0; i < 2; ++i) {
          const double sq = integrate([&](std::span<const double> t) { return std::pow(e.evaluate(t)[i], 2); }, rule);
          double parseval = 0.0;
          for (std::size_t k = 0; k < T; ++k) parseval += a[i * T + k] * a[i * T + k];
          CHECK(sq == doctest::Approx(parseval).epsilon(1e-10));
          for (std::size_t k = 0; k < T; ++k) {
            const double proj = integrate([&](std::span<const double> t) { return e.evaluate(t)[i] * b.eval(k, t); }, rule);
            CHECK(std::fabs(proj - a[i * T + k]) < 1e-10);
          }
          const double mean = integrate([&](std::span<const double> t) { return e.evaluate(t)[i]; }, rule);
          CHECK(std::fabs(moments(e).mean[i] - mean) < 1e-10);
        }
      }
    }
  }

  TEST_CASE("combined expansions") {
    const Expansion e(hermite1(1), 2, {1.0, 2.0, 3.0, 4.0});
    const Expansion c = e.combine(std::vector<double>{2.0, -1.0});
    CHECK(c.decisions() == 1);
    CHECK(c.coeff(0, 0) == -1.0);
    CHECK(c.coeff(0, 1) == 0.0);
  }
}
