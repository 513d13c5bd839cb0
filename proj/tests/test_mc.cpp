#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pcopt/builtin.hpp"
#include "pcopt/error.hpp"
#include "pcopt/mc.hpp"
#include "pcopt/rng.hpp"

using namespace pcopt;

namespace {

// Independent re-statement of the stream construction.
std::uint64_t ref_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
std::uint64_t ref_output(std::uint64_t seed, std::uint64_t index, std::uint64_t k) {
  const std::uint64_t key = ref_mix(seed + 0x9e3779b97f4a7c15ULL) ^ ref_mix(index * 0xd1b54a32d192ed03ULL + 1);
  return ref_mix(key + (k + 1) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace

TEST_SUITE("mc") {
  TEST_CASE("streams are pure functions of (seed, index, counter)") {
    SampleStream a(42, 7), b(42, 7);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const std::uint64_t x = a.next_u64();
      CHECK(x == b.next_u64());
      CHECK(x == ref_output(42, 7, k));
    }
    CHECK(a.counter() == 10);
    // Known value of the standard splitmix64 finalizer.
    CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0xe220a8397b1dcdafULL);
    SampleStream c(42, 8);
    CHECK(c.next_u64() != ref_output(42, 7, 0));
  }

  TEST_CASE("draw laws") {
    double sn = 0.0, sn2 = 0.0, su = 0.0;
    double umin = 1.0, umax = -1.0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
      SampleStream s(3, static_cast<std::uint64_t>(i));
      const double z = s.normal_draw();
      sn += z;
      sn2 += z * z;
      const double u = s.uniform_draw();
      su += u;
      umin = std::min(umin, u);
      umax = std::max(umax, u);
    }
    const double mean = sn / N;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(std::fabs(sn2 / N - mean * mean - 1.0) < 0.02);
    CHECK(std::fabs(su / N) < 0.01);
    CHECK(umin >= -1.0);
    CHECK(umax <= 1.0);
  }

  TEST_CASE("sample statistics") {
    const std::vector<std::vector<double>> rows{{1.0}, {2.0}, {3.0}, {100.0}};
    const SampleStats st = sample_stats(rows, {true, true, true, false});
    CHECK(st.n == 3);
    CHECK(st.excluded == 1);
    CHECK(st.mean[0] == 2.0);
    CHECK(st.std[0] == doctest::Approx(1.0));
    CHECK(st.min[0] == 1.0);
    CHECK(st.max[0] == 3.0);
    CHECK(st.std_error[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK_THROWS_AS(sample_stats(rows, {true, false, false, false}), InputError);
  }

  TEST_CASE("random quadratic against the closed form") {
    const auto ex = quadratic_example();
    const McResult r = mc_solve(ex.problem, 1000, 0, ex.start, {});
    CHECK(r.stats.excluded == 0);
    for (std::size_t s = 0; s < 1000; ++s) {
      const double lambda = 0.1 * r.xi[s][0];
      CHECK(std::fabs(r.optimum[s][0] - oracle::quadratic_argmin(lambda)) < 1e-6);
    }
    CHECK(std::fabs(r.stats.mean[0] - (-0.508)) < 0.01);
    CHECK(std::fabs(r.stats.std[0] - 0.055) < 0.01);
    for (std::size_t i = 0; i < r.stats.mean.size(); ++i) {
      CHECK(r.stats.min[i] <= r.stats.mean[i]);
      CHECK(r.stats.mean[i] <= r.stats.max[i]);
    }
  }

  TEST_CASE("Himmelblau equilibrium 1 statistics") {
    const auto ex = himmelblau_example(1);
    const McResult r = mc_solve(ex.problem, 1000, 0, ex.start, {});
    const double se0 = r.stats.std_error[0], se1 = r.stats.std_error[1];
    CHECK(std::fabs(r.stats.mean[0] - 2.98) < 3 * se0);
    CHECK(std::fabs(r.stats.mean[1] - 2.0) < 3 * se1);
    // Standard error of a sample std is about std / sqrt(2 (n - 1)).
    CHECK(std::fabs(r.stats.std[0] - 0.36) < 3 * r.stats.std[0] / std::sqrt(2.0 * 999));
    CHECK(std::fabs(r.stats.std[1] - 0.09) < 3 * r.stats.std[1] / std::sqrt(2.0 * 999));
  }

  TEST_CASE("degenerate spread reproduces the deterministic optimum") {
    const auto p = parse_problem("[decision]\nx\n[random]\nl ~ normal(0.25, 1e-12)\n[objective]\nminimize (1 + l)*x^2 + x\n");
    const McResult r = mc_solve(p, 50, 1, std::vector<double>{0.0}, {});
    CHECK(r.stats.std[0] < 1e-9);
    CHECK(r.stats.mean[0] == doctest::Approx(oracle::quadratic_argmin(0.25)).epsilon(1e-9));
  }

  TEST_CASE("results do not depend on the worker count") {
    const auto ex = himmelblau_example(3);
    const McResult one = mc_solve(ex.problem, 200, 9, ex.start, {}, 1);
    const McResult three = mc_solve(ex.problem, 200, 9, ex.start, {}, 3);
    CHECK(one.optimum == three.optimum);
    CHECK(one.stats.mean == three.stats.mean);
    CHECK(one.stats.std == three.stats.std);
  }

  TEST_CASE("mean error shrinks with the sample count") {
    const auto ex = quadratic_example();
    const double truth = oracle::quadratic_mean_argmin();
    double prev = 1e9, prev_se = 0.0;
    for (std::size_t n : {100u, 1000u, 10000u}) {
      // Average over seeds so a single lucky draw cannot break the ordering.
      double err = 0.0, se = 0.0;
      for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const McResult r = mc_solve(ex.problem, n, seed, ex.start, {});
        err += std::fabs(r.stats.mean[0] - truth) / 8.0;
        se += r.stats.std_error[0] / 8.0;
      }
      CHECK(err < prev);
      if (prev_se > 0.0) CHECK(prev_se / se == doctest::Approx(std::sqrt(10.0)).epsilon(0.1));
      prev = err;
      prev_se = se;
    }
  }

  TEST_CASE("errors and exclusions") {
    const auto ex = quadratic_example();
    CHECK_THROWS_AS(mc_solve(ex.problem, 1, 0, ex.start, {}), InputError);
    CHECK_THROWS_AS(mc_solve(ex.problem, 10, 0, std::vector<double>{1.0, 2.0}, {}), InputError);
    const auto hard = parse_problem("[decision]\nx, y\n[random]\nl ~ normal(0, 1)\n[objective]\nminimize (1 - x)^2 + 100*(y - x^2 + l)^2\n");
    SolveOptions capped;
    capped.max_iters = 2;
    CHECK_THROWS_AS(mc_solve(hard, 20, 0, std::vector<double>{-1.2, 1.0}, capped), SolveError);
  }

  TEST_CASE("samples CSV") {
    const auto ex = himmelblau_example(1);
    const McResult r = mc_solve(ex.problem, 5, 0, ex.start, {});
    std::ostringstream out;
    write_samples_csv(out, r);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "sample,x1,x2,converged");
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
      ++rows;
    }
    CHECK(rows == 5);
  }
}
