#pragma once

// Run drivers shared by the command-line tool and the tests, and the JSON
// report they produce.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcopt/builtin.hpp"
#include "pcopt/diagnostics.hpp"
#include "pcopt/mc.hpp"
#include "pcopt/problem.hpp"
#include "pcopt/solver.hpp"
#include "pcopt/transform.hpp"

namespace pcopt {

struct ParameterDigest {
  std::string name;
  std::string distribution;  // "normal" or "uniform"
  double a = 0.0;
  double b = 0.0;

  bool operator==(const ParameterDigest&) const = default;
};

struct ProblemDigest {
  std::string name;
  std::string sense;
  std::vector<std::string> decisions;
  std::vector<ParameterDigest> random;
  std::size_t d = 0, p = 0, m = 0, n = 0;

  bool operator==(const ProblemDigest&) const = default;
};

ProblemDigest digest(const StochasticProblem& prob, const std::string& name);

struct MetricSummary {
  std::string name;
  double mean = 0.0;
  double std = 0.0;

  bool operator==(const MetricSummary&) const = default;
};

struct PcDetails {
  std::vector<std::string> families;
  unsigned order = 0;
  std::size_t nodes_per_dim = 0;
  std::size_t quad_size = 0;
  std::string mode;
  std::vector<std::vector<double>> coefficients;  // one row per decision
  double objective = 0.0;                         // declared sense
  KKTReport kkt;
  std::optional<double> dual_gap;  // constrained problems; empty if the dual solve failed
  std::optional<GapBoundReport> diagnostics;
};

struct McDetails {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t used = 0;
  std::size_t excluded = 0;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<double> std_error;

  bool operator==(const McDetails&) const = default;
};

struct RunReport {
  ProblemDigest problem;
  std::string method;  // "pc" or "mc"
  std::vector<double> mean;
  std::vector<double> std;
  /// central[j][i]: central moment of order j + 2 of decision i.
  std::vector<std::vector<double>> central;
  std::vector<MetricSummary> metrics;
  std::optional<PcDetails> pc;
  std::optional<McDetails> mc;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;

  /// Field-wise equality through the serialized form, timing included.
  bool operator==(const RunReport& other) const;
};

nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

/// Serialized report with the timing block removed, for determinism checks.
std::string deterministic_dump(const RunReport& report);

struct PcRunOptions {
  unsigned order = 1;
  std::size_t quad_nodes = 0;  // per dimension; 0 selects 2r + 2
  ConstraintMode mode = ConstraintMode::expectation;
  std::vector<double> start;  // decision space; empty means zeros
  unsigned max_moment = 4;
  bool diagnostics = false;
  std::uint64_t diagnostics_seed = 0;
  SolveOptions solve;
};

struct McRunOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::vector<double> start;
  unsigned max_moment = 4;
  unsigned workers = 0;
  SolveOptions solve;
};

RunReport run_pc(const StochasticProblem& prob, const std::string& name, const PcRunOptions& opts,
                 const std::vector<Metric>& metrics = {});

/// raw, when given, receives the per-sample optima.
RunReport run_mc(const StochasticProblem& prob, const std::string& name, const McRunOptions& opts,
                 const std::vector<Metric>& metrics = {}, McResult* raw = nullptr);

/// Options that reproduce a built-in example's configured settings.
PcRunOptions pc_options(const ExampleConfig& config);
McRunOptions mc_options(const ExampleConfig& config, std::size_t samples, std::uint64_t seed);

}  // namespace pcopt
