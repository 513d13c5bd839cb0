#pragma once

// The three worked examples shipped with the tool, plus the additive-noise
// problem used to sanity-check the interchange bound.

#include <array>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "pcopt/problem.hpp"
#include "pcopt/transform.hpp"

namespace pcopt {

/// A named linear functional of the decision vector, reported alongside the
/// decision moments: value = scale * sum_i weights[i] x_i.
struct Metric {
  std::string name;
  std::vector<double> weights;
  double scale = 1.0;
};

struct ExampleConfig {
  std::string name;
  StochasticProblem problem;
  unsigned order = 1;
  std::size_t quad_nodes = 4;
  ConstraintMode mode = ConstraintMode::expectation;
  std::vector<double> start;  // decision-space start point
  std::vector<Metric> metrics;
};

/// min (1 + lambda) x^2 + x, lambda ~ N(0, 0.1); order 2, 10 nodes.
ExampleConfig quadratic_example();

/// Random Himmelblau (x1^2 + x2 - 11 + 2 lambda)^2 + (x1 + x2^2 - 7)^2,
/// lambda ~ N(0, 1); order 1, started in the basin of equilibrium 1..4.
ExampleConfig himmelblau_example(int equilibrium);

/// Start points inside the four basins, and the nominal minimizers.
const std::array<std::array<double, 2>, 4>& himmelblau_starts();
const std::array<std::array<double, 2>, 4>& himmelblau_reference_minima();

/// Nominal Himmelblau value.
double himmelblau(double x1, double x2);

/// CSV `x1,x2,f` of the nominal function on an n-by-n grid over [-5, 5]^2.
void write_himmelblau_grid(std::ostream& out, std::size_t n = 101);

struct SchedulingTask {
  std::string name;
  double time;    // duration; carried for completeness, not used by the LP
  double reward;
  double load;    // change in operator task load
  bool rest;
};

const std::vector<SchedulingTask>& scheduling_tasks();
constexpr std::size_t kSchedulingSlots = 10;

/// Task-load scheduling LP with a random load threshold beta ~ N(1, 0.2).
/// Decision x_i_j is the fraction of task i done in slot j. Work tasks are
/// capped at one completion; rest tasks at min(1, beta) completions; every
/// slot's accumulated load is capped at beta. Collocation mode, order 4,
/// 5 nodes. Metrics: completion and rest usage in percent.
ExampleConfig scheduling_example();

/// min (x - 3)^2 + lambda: the minimizer does not depend on lambda.
ExampleConfig additive_example();

ExampleConfig example_by_name(const std::string& name, int equilibrium = 1);

/// Coefficient vector whose zeroth-order terms hold the decision start and
/// every higher-order term is zero.
std::vector<double> coefficient_start(const std::vector<double>& start, std::size_t decisions, std::size_t terms);

}  // namespace pcopt
