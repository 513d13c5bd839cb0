#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "pcopt/problem.hpp"
#include "pcopt/solver.hpp"

namespace pcopt {

struct SampleStats {
  std::size_t n = 0;         // samples that entered the statistics
  std::size_t excluded = 0;  // non-converged samples left out
  std::vector<double> mean;
  std::vector<double> std;  // divisor n - 1
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> std_error;  // std / sqrt(n)
};

/// Column statistics of rows[s][i] over the rows with keep[s] set, in row
/// order. Needs at least two kept rows.
SampleStats sample_stats(const std::vector<std::vector<double>>& rows, const std::vector<bool>& keep);

struct McResult {
  SampleStats stats;
  std::vector<std::vector<double>> xi;       // standardized draws per sample
  std::vector<std::vector<double>> optimum;  // decision vector per sample
  std::vector<bool> converged;
};

/// Standardized draws for sample `index`: one normal or uniform draw per
/// random parameter, in declaration order.
std::vector<double> draw_sample(const StochasticProblem& prob, std::uint64_t seed, std::uint64_t index);

/// Solve the problem at `samples` independent parameter draws from `start`.
/// Non-converged samples are excluded; more than 5% exclusions throws
/// SolveError. workers = 0 uses the hardware concurrency. Results do not
/// depend on the worker count.
McResult mc_solve(const StochasticProblem& prob, std::size_t samples, std::uint64_t seed,
                  std::span<const double> start, const SolveOptions& opts, unsigned workers = 0);

/// CSV with header sample,x1,...,xd,converged.
void write_samples_csv(std::ostream& out, const McResult& result);

}  // namespace pcopt
