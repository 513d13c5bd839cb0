#include <cstring>
#include <random>

#include "doctest.h"
#include "pcopt/builtin.hpp"
#include "pcopt/orthopoly.hpp"
#include "pcopt/simd.hpp"
#include "pcopt/transform.hpp"

using namespace pcopt;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::vector<simd::Isa> vector_isas() {
  std::vector<simd::Isa> out;
  for (auto isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (simd::isa_available(isa)) out.push_back(isa);
  }
  return out;
}

// Restores the process-wide selection on scope exit.
struct IsaGuard {
  simd::Isa saved = simd::kernels().isa;
  ~IsaGuard() { simd::select_isa(saved); }
};

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("scalar kernels are always available") {
    CHECK(simd::isa_available(simd::Isa::scalar));
    CHECK(simd::kernels(simd::Isa::scalar).isa == simd::Isa::scalar);
    MESSAGE("selected ISA: " << simd::isa_name(simd::kernels().isa));
  }

  TEST_CASE("vector kernels are bitwise identical to the scalar reference") {
    const auto& S = simd::kernels(simd::Isa::scalar);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> nd(0.0, 3.0);
    for (auto isa : vector_isas()) {
      const auto& V = simd::kernels(isa);
      for (std::size_t n = 0; n <= 37; ++n) {
        std::vector<double> a(n), b(n), y0(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = nd(gen);
          b[i] = nd(gen);
          if (b[i] == 0.0) b[i] = 1.0;
          y0[i] = nd(gen);
        }
        auto binary = [&](auto fs, auto fv) {
          std::vector<double> os(n), ov(n);
          fs(a.data(), b.data(), os.data(), n);
          fv(a.data(), b.data(), ov.data(), n);
          CHECK(same_bits(os, ov));
        };
        binary(S.add, V.add);
        binary(S.sub, V.sub);
        binary(S.mul, V.mul);
        binary(S.div, V.div);
        std::vector<double> ys(y0), yv(y0);
        S.neg(a.data(), ys.data(), n);
        V.neg(a.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.scale(1.7, a.data(), ys.data(), n);
        V.scale(1.7, a.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        ys = y0;
        yv = y0;
        S.axpy(-0.3, a.data(), ys.data(), n);
        V.axpy(-0.3, a.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.acc(a.data(), ys.data(), n);
        V.acc(a.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.dec(b.data(), ys.data(), n);
        V.dec(b.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.mul_acc(a.data(), b.data(), ys.data(), n);
        V.mul_acc(a.data(), b.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.mul_dec(a.data(), b.data(), ys.data(), n);
        V.mul_dec(a.data(), b.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        S.div_acc(a.data(), b.data(), ys.data(), n);
        V.div_acc(a.data(), b.data(), yv.data(), n);
        CHECK(same_bits(ys, yv));
        for (unsigned e = 0; e <= 9; ++e) {
          S.powi(a.data(), e, ys.data(), n);
          V.powi(a.data(), e, yv.data(), n);
          CHECK(same_bits(ys, yv));
        }
        S.fill(2.5, ys.data(), n);
        V.fill(2.5, yv.data(), n);
        CHECK(same_bits(ys, yv));
        CHECK(same_bits(S.dot(a.data(), b.data(), n), V.dot(a.data(), b.data(), n)));
        CHECK(same_bits(S.sum(a.data(), n), V.sum(a.data(), n)));
      }
    }
  }

  TEST_CASE("end-to-end evaluations agree across ISAs") {
    IsaGuard guard;
    const auto ex = scheduling_example();
    const DeterministicProblem dp(ex.problem, Basis(ex.problem.families(), ex.order),
                                  problem_rule(ex.problem, ex.quad_nodes), ex.mode);
    const auto him = himmelblau_example(2).problem;
    const DeterministicProblem hp(him, Basis(him.families(), 3), problem_rule(him, 8));
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd(0.0, 0.5);
    std::vector<double> a(dp.dim()), b(hp.dim());
    for (double& v : a) v = nd(gen);
    for (double& v : b) v = nd(gen);
    std::vector<double> us(dp.num_inequalities()), vs(dp.num_equalities());
    for (double& v : us) v = nd(gen);
    for (double& v : vs) v = nd(gen);

    auto run = [&] {
      std::vector<double> out;
      std::vector<double> g(dp.dim()), G(dp.num_inequalities()), H(dp.num_equalities()), jt(dp.dim()), gh(hp.dim());
      out.push_back(dp.gradient(a, g));
      out.insert(out.end(), g.begin(), g.end());
      dp.constraints(a, G, H);
      out.insert(out.end(), G.begin(), G.end());
      out.insert(out.end(), H.begin(), H.end());
      dp.constraint_vjp(a, us, vs, jt);
      out.insert(out.end(), jt.begin(), jt.end());
      out.push_back(hp.gradient(b, gh));
      out.insert(out.end(), gh.begin(), gh.end());
      const auto t = eval_orthonormal_table(PolynomialFamily::legendre, 7, b);
      out.insert(out.end(), t.begin(), t.end());
      return out;
    };
    simd::select_isa(simd::Isa::scalar);
    const auto ref = run();
    for (auto isa : vector_isas()) {
      simd::select_isa(isa);
      CHECK(same_bits(ref, run()));
    }
  }
}
