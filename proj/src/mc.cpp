#include "pcopt/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <thread>

#include "pcopt/error.hpp"
#include "pcopt/rng.hpp"
#include "pcopt/transform.hpp"

namespace pcopt {

SampleStats sample_stats(const std::vector<std::vector<double>>& rows, const std::vector<bool>& keep) {
  if (rows.size() != keep.size()) throw InputError("sample_stats: row and flag counts differ");
  SampleStats st;
  const std::size_t d = rows.empty() ? 0 : rows.front().size();
  st.mean.assign(d, 0.0);
  st.std.assign(d, 0.0);
  st.min.assign(d, std::numeric_limits<double>::infinity());
  st.max.assign(d, -std::numeric_limits<double>::infinity());
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (!keep[s]) {
      ++st.excluded;
      continue;
    }
    ++st.n;
    for (std::size_t i = 0; i < d; ++i) {
      st.mean[i] += rows[s][i];
      st.min[i] = std::min(st.min[i], rows[s][i]);
      st.max[i] = std::max(st.max[i], rows[s][i]);
    }
  }
  if (st.n < 2) throw InputError("sample statistics need at least two samples");
  for (double& m : st.mean) m /= static_cast<double>(st.n);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (!keep[s]) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = rows[s][i] - st.mean[i];
      st.std[i] += c * c;
    }
  }
  st.std_error.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    st.std[i] = std::sqrt(st.std[i] / static_cast<double>(st.n - 1));
    st.std_error[i] = st.std[i] / std::sqrt(static_cast<double>(st.n));
    // Rounding in the mean can push it a hair outside [min, max] when all
    // samples agree.
    st.mean[i] = std::clamp(st.mean[i], st.min[i], st.max[i]);
  }
  return st;
}

std::vector<double> draw_sample(const StochasticProblem& prob, std::uint64_t seed, std::uint64_t index) {
  SampleStream stream(seed, index);
  std::vector<double> xi;
  xi.reserve(prob.p());
  for (const auto& r : prob.random) {
    xi.push_back(r.dist.kind == Distribution::Kind::normal ? stream.normal_draw() : stream.uniform_draw());
  }
  return xi;
}

McResult mc_solve(const StochasticProblem& prob, std::size_t samples, std::uint64_t seed,
                  std::span<const double> start, const SolveOptions& opts, unsigned workers) {
  if (samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  prob.validate();
  opts.validate();
  if (!start.empty() && start.size() != prob.d()) {
    throw InputError("start point has " + std::to_string(start.size()) + " entries, expected " +
                     std::to_string(prob.d()));
  }
  McResult res;
  res.xi.resize(samples);
  res.optimum.resize(samples);
  std::vector<char> ok(samples, 0);

  SolveOptions inner = opts;
  inner.initial_point.assign(start.begin(), start.end());

  auto run_one = [&](std::size_t s) {
    res.xi[s] = draw_sample(prob, seed, s);
    try {
      const DeterministicProblem dp = fixed_parameter_problem(prob, res.xi[s]);
      const SolveResult r = solve(dp, inner);
      res.optimum[s] = r.a;
      ok[s] = r.converged ? 1 : 0;
    } catch (const NumericError&) {
      res.optimum[s].assign(prob.d(), std::numeric_limits<double>::quiet_NaN());
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, samples));
  if (workers <= 1) {
    for (std::size_t s = 0; s < samples; ++s) run_one(s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next.fetch_add(1); s < samples; s = next.fetch_add(1)) run_one(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  res.converged.assign(ok.begin(), ok.end());
  const std::size_t bad = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  if (20 * bad > samples) {
    throw SolveError(std::to_string(bad) + " of " + std::to_string(samples) +
                     " Monte Carlo samples failed to converge (more than 5%)");
  }
  res.stats = sample_stats(res.optimum, res.converged);
  return res;
}

void write_samples_csv(std::ostream& out, const McResult& result) {
  const std::size_t d = result.optimum.empty() ? 0 : result.optimum.front().size();
  out << "sample";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << (i + 1);
  out << ",converged\n";
  out << std::setprecision(17);
  for (std::size_t s = 0; s < result.optimum.size(); ++s) {
    out << s;
    for (double x : result.optimum[s]) out << ',' << x;
    out << ',' << (result.converged[s] ? 1 : 0) << '\n';
  }
}

}  // namespace pcopt
