#include "pcopt/builtin.hpp"

#include <iomanip>

#include "pcopt/error.hpp"

namespace pcopt {

namespace {

Expression var(const std::string& name) { return Expression::variable(name); }
Expression num(double v) { return Expression::constant(v); }

}  // namespace

ExampleConfig quadratic_example() {
  ExampleConfig ex;
  ex.name = "quadratic";
  ex.problem = parse_problem(
      "[decision]\nx\n"
      "[random]\nlambda ~ normal(0.0, 0.1)\n"
      "[objective]\nminimize (1 + lambda)*x^2 + x\n");
  ex.order = 2;
  ex.quad_nodes = 10;
  ex.start = {0.0};
  return ex;
}

const std::array<std::array<double, 2>, 4>& himmelblau_starts() {
  static const std::array<std::array<double, 2>, 4> starts{{{3.0, 3.0}, {-3.0, 3.0}, {-4.0, -4.0}, {3.5, -1.8}}};
  return starts;
}

const std::array<std::array<double, 2>, 4>& himmelblau_reference_minima() {
  static const std::array<std::array<double, 2>, 4> minima{
      {{3.0, 2.0}, {-2.805118, 3.131312}, {-3.779310, -3.283186}, {3.584428, -1.848126}}};
  return minima;
}

double himmelblau(double x1, double x2) {
  const double a = x1 * x1 + x2 - 11.0;
  const double b = x1 + x2 * x2 - 7.0;
  return a * a + b * b;
}

ExampleConfig himmelblau_example(int equilibrium) {
  if (equilibrium < 1 || equilibrium > 4) throw InputError("himmelblau equilibrium must be 1, 2, 3 or 4");
  ExampleConfig ex;
  ex.name = "himmelblau";
  ex.problem = parse_problem(
      "[decision]\nx1, x2\n"
      "[random]\nlambda ~ normal(0.0, 1.0)\n"
      "[objective]\nminimize (x1^2 + x2 - 11 + 2*lambda)^2 + (x1 + x2^2 - 7)^2\n");
  ex.order = 1;
  ex.quad_nodes = default_node_count(1);
  const auto& s = himmelblau_starts()[static_cast<std::size_t>(equilibrium - 1)];
  ex.start = {s[0], s[1]};
  return ex;
}

void write_himmelblau_grid(std::ostream& out, std::size_t n) {
  if (n < 2) throw InputError("grid needs at least 2 points per axis");
  out << "x1,x2,f\n" << std::setprecision(17);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      const double x2 = -5.0 + 10.0 * static_cast<double>(j) / static_cast<double>(n - 1);
      out << x1 << ',' << x2 << ',' << himmelblau(x1, x2) << '\n';
    }
  }
}

const std::vector<SchedulingTask>& scheduling_tasks() {
  static const std::vector<SchedulingTask> tasks{
      {"work1", 1.0, 1.0, 3.0, false}, {"work2", 1.0, 1.0, 3.0, false}, {"work3", 1.0, 1.0, 3.0, false},
      {"rest1", 1.0, 1.0, -1.0, true}, {"rest2", 1.0, 1.0, -1.0, true}, {"rest3", 1.0, 1.0, -1.0, true},
  };
  return tasks;
}

ExampleConfig scheduling_example() {
  const auto& tasks = scheduling_tasks();
  const std::size_t S = kSchedulingSlots;
  auto name = [](std::size_t i, std::size_t j) { return "x" + std::to_string(i + 1) + "_" + std::to_string(j + 1); };

  StochasticProblem prob;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = 0; j < S; ++j) prob.decisions.push_back(name(i, j));
  }
  prob.random.push_back({"beta", Distribution::normal(1.0, 0.2)});
  const Expression beta = var("beta");

  prob.sense = Sense::maximize;
  Expression reward;
  bool first = true;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = 0; j < S; ++j) {
      const Expression term = tasks[i].reward == 1.0 ? var(name(i, j)) : num(tasks[i].reward) * var(name(i, j));
      reward = first ? term : reward + term;
      first = false;
    }
  }
  prob.objective = reward;

  auto row_sum = [&](std::size_t i) {
    Expression s = var(name(i, 0));
    for (std::size_t j = 1; j < S; ++j) s = s + var(name(i, j));
    return s;
  };
  for (std::size_t i = 0; i < tasks.size(); ++i) prob.inequalities.push_back(row_sum(i) - num(1.0));
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].rest) prob.inequalities.push_back(row_sum(i) - beta);
  }
  for (std::size_t j = 0; j < S; ++j) {
    Expression load = num(tasks[0].load) * var(name(0, j));
    for (std::size_t i = 1; i < tasks.size(); ++i) load = load + num(tasks[i].load) * var(name(i, j));
    prob.inequalities.push_back(load - beta);
  }
  for (const auto& x : prob.decisions) prob.inequalities.push_back(-var(x));
  prob.validate();

  ExampleConfig ex;
  ex.name = "scheduling";
  ex.problem = std::move(prob);
  ex.order = 4;
  ex.quad_nodes = 5;
  ex.mode = ConstraintMode::collocation;
  ex.start.assign(ex.problem.d(), 0.0);

  Metric completion{"completion_percent", std::vector<double>(ex.problem.d(), 0.0), 0.0};
  Metric rest{"rest_percent", std::vector<double>(ex.problem.d(), 0.0), 0.0};
  double n_work = 0.0;
  double n_rest = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Metric& m = tasks[i].rest ? rest : completion;
    (tasks[i].rest ? n_rest : n_work) += 1.0;
    for (std::size_t j = 0; j < S; ++j) m.weights[i * S + j] = 1.0;
  }
  completion.scale = 100.0 / n_work;
  rest.scale = 100.0 / n_rest;
  ex.metrics = {completion, rest};
  return ex;
}

ExampleConfig additive_example() {
  ExampleConfig ex;
  ex.name = "additive";
  ex.problem = parse_problem(
      "[decision]\nx\n"
      "[random]\nlambda ~ normal(0.0, 1.0)\n"
      "[objective]\nminimize (x - 3)^2 + lambda\n");
  ex.order = 1;
  ex.quad_nodes = default_node_count(1);
  ex.start = {0.0};
  return ex;
}

ExampleConfig example_by_name(const std::string& name, int equilibrium) {
  if (name == "quadratic") return quadratic_example();
  if (name == "himmelblau") return himmelblau_example(equilibrium);
  if (name == "scheduling") return scheduling_example();
  if (name == "additive") return additive_example();
  throw InputError("unknown example '" + name + "' (expected quadratic, himmelblau or scheduling)");
}

std::vector<double> coefficient_start(const std::vector<double>& start, std::size_t decisions, std::size_t terms) {
  std::vector<double> a(decisions * terms, 0.0);
  if (start.empty()) return a;
  if (start.size() != decisions) throw InputError("start point length does not match the decision count");
  for (std::size_t i = 0; i < decisions; ++i) a[i * terms] = start[i];
  return a;
}

}  // namespace pcopt
