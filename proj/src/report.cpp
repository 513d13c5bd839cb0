#include "pcopt/report.hpp"

#include <chrono>
#include <cmath>

#include "pcopt/error.hpp"
#include "pcopt/pce.hpp"

namespace pcopt {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Null for missing optionals; NaN and infinities have no JSON form and are
// rejected before serialization.
json number(double x) {
  if (!std::isfinite(x)) throw NumericError("report: non-finite value cannot be serialized");
  return x;
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json table(const std::vector<std::vector<double>>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back(numbers(r));
  return out;
}

std::vector<std::vector<double>> table_from(const json& j) { return j.get<std::vector<std::vector<double>>>(); }

json kkt_json(const KKTReport& k) {
  return {{"stationarity", number(k.stationarity)},
          {"feasibility", number(k.feasibility)},
          {"complementarity", number(k.complementarity)},
          {"dual_sign", number(k.dual_sign)}};
}

KKTReport kkt_from(const json& j) {
  KKTReport k;
  k.stationarity = j.at("stationarity").get<double>();
  k.feasibility = j.at("feasibility").get<double>();
  k.complementarity = j.at("complementarity").get<double>();
  k.dual_sign = j.at("dual_sign").get<double>();
  return k;
}

json gap_json(const GapBoundReport& g) {
  return {{"lipschitz_L", number(g.lipschitz_L)},
          {"weighted_deviation", number(g.weighted_deviation)},
          {"bound", number(g.bound)},
          {"observed_gap", number(g.observed_gap)},
          {"q", numbers(g.q)},
          {"p_hat", table(g.p_hat)},
          {"lipschitz_estimate", "empirical"}};
}

GapBoundReport gap_from(const json& j) {
  GapBoundReport g;
  g.lipschitz_L = j.at("lipschitz_L").get<double>();
  g.weighted_deviation = j.at("weighted_deviation").get<double>();
  g.bound = j.at("bound").get<double>();
  g.observed_gap = j.at("observed_gap").get<double>();
  g.q = j.at("q").get<std::vector<double>>();
  g.p_hat = table_from(j.at("p_hat"));
  return g;
}

std::vector<MetricSummary> summarize_pc_metrics(const Expansion& exp, const std::vector<Metric>& metrics) {
  std::vector<MetricSummary> out;
  for (const Metric& m : metrics) {
    const Expansion e = exp.combine(m.weights);
    double ss = 0.0;
    for (std::size_t k = 1; k < e.terms(); ++k) ss += e.coeff(0, k) * e.coeff(0, k);
    out.push_back({m.name, m.scale * e.coeff(0, 0), std::fabs(m.scale) * std::sqrt(ss)});
  }
  return out;
}

// Biased sample central moments of orders 2..max_k over the kept rows.
std::vector<std::vector<double>> sample_central(const McResult& r, const std::vector<double>& mean, unsigned max_k) {
  if (max_k < 2) return {};
  const std::size_t d = mean.size();
  std::vector<std::vector<double>> out(max_k - 1, std::vector<double>(d, 0.0));
  for (std::size_t s = 0; s < r.optimum.size(); ++s) {
    if (!r.converged[s]) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const double c = r.optimum[s][i] - mean[i];
      double pw = c;
      for (unsigned k = 2; k <= max_k; ++k) {
        pw *= c;
        out[k - 2][i] += pw;
      }
    }
  }
  for (auto& row : out) {
    for (double& x : row) x /= static_cast<double>(r.stats.n);
  }
  return out;
}

void check_moment_order(unsigned k) {
  if (k < 2 || k > 8) throw InputError("moment order must be between 2 and 8");
}

}  // namespace

ProblemDigest digest(const StochasticProblem& prob, const std::string& name) {
  ProblemDigest dg;
  dg.name = name;
  dg.sense = prob.sense == Sense::minimize ? "minimize" : "maximize";
  dg.decisions = prob.decisions;
  for (const auto& rp : prob.random) {
    dg.random.push_back({rp.name, rp.dist.kind == Distribution::Kind::normal ? "normal" : "uniform", rp.dist.a, rp.dist.b});
  }
  dg.d = prob.d();
  dg.p = prob.p();
  dg.m = prob.m();
  dg.n = prob.n();
  return dg;
}

json to_json(const RunReport& r) {
  json j;
  json random = json::array();
  for (const auto& rp : r.problem.random) {
    random.push_back({{"name", rp.name}, {"distribution", rp.distribution}, {"params", {number(rp.a), number(rp.b)}}});
  }
  j["problem"] = {{"name", r.problem.name}, {"sense", r.problem.sense}, {"decisions", r.problem.decisions},
                  {"random", random},        {"d", r.problem.d},         {"p", r.problem.p},
                  {"m", r.problem.m},        {"n", r.problem.n}};
  j["method"] = r.method;
  j["moments"] = {{"mean", numbers(r.mean)}, {"std", numbers(r.std)}, {"central", table(r.central)}};
  json metrics = json::array();
  for (const auto& m : r.metrics) metrics.push_back({{"name", m.name}, {"mean", number(m.mean)}, {"std", number(m.std)}});
  j["metrics"] = metrics;

  if (r.pc) {
    const PcDetails& pc = *r.pc;
    j["basis"] = {{"families", pc.families}, {"order", pc.order}};
    j["quadrature"] = {{"nodes_per_dim", pc.nodes_per_dim}, {"size", pc.quad_size}};
    j["mode"] = pc.mode;
    j["coefficients"] = table(pc.coefficients);
    j["objective"] = number(pc.objective);
    j["kkt"] = kkt_json(pc.kkt);
    j["dual_gap"] = pc.dual_gap ? number(*pc.dual_gap) : json(nullptr);
    j["diagnostics"] = pc.diagnostics ? gap_json(*pc.diagnostics) : json(nullptr);
  } else {
    for (const char* key : {"basis", "quadrature", "mode", "coefficients", "objective", "kkt", "dual_gap", "diagnostics"}) {
      j[key] = nullptr;
    }
  }
  if (r.mc) {
    const McDetails& mc = *r.mc;
    j["sampling"] = {{"seed", mc.seed},         {"samples", mc.samples},       {"used", mc.used},
                     {"excluded", mc.excluded}, {"min", numbers(mc.min)},      {"max", numbers(mc.max)},
                     {"std_error", numbers(mc.std_error)}};
  } else {
    j["sampling"] = nullptr;
  }
  j["solver"] = {{"iterations", r.iterations}, {"converged", r.converged}};
  j["timing"] = {{"wall_seconds", number(r.wall_seconds)}};
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    const json& pj = j.at("problem");
    r.problem.name = pj.at("name").get<std::string>();
    r.problem.sense = pj.at("sense").get<std::string>();
    r.problem.decisions = pj.at("decisions").get<std::vector<std::string>>();
    for (const json& rp : pj.at("random")) {
      const json& params = rp.at("params");
      r.problem.random.push_back({rp.at("name").get<std::string>(), rp.at("distribution").get<std::string>(),
                                  params.at(0).get<double>(), params.at(1).get<double>()});
    }
    r.problem.d = pj.at("d").get<std::size_t>();
    r.problem.p = pj.at("p").get<std::size_t>();
    r.problem.m = pj.at("m").get<std::size_t>();
    r.problem.n = pj.at("n").get<std::size_t>();
    r.method = j.at("method").get<std::string>();
    const json& mj = j.at("moments");
    r.mean = mj.at("mean").get<std::vector<double>>();
    r.std = mj.at("std").get<std::vector<double>>();
    r.central = table_from(mj.at("central"));
    for (const json& m : j.at("metrics")) {
      r.metrics.push_back({m.at("name").get<std::string>(), m.at("mean").get<double>(), m.at("std").get<double>()});
    }
    if (!j.at("basis").is_null()) {
      PcDetails pc;
      pc.families = j["basis"].at("families").get<std::vector<std::string>>();
      pc.order = j["basis"].at("order").get<unsigned>();
      pc.nodes_per_dim = j.at("quadrature").at("nodes_per_dim").get<std::size_t>();
      pc.quad_size = j.at("quadrature").at("size").get<std::size_t>();
      pc.mode = j.at("mode").get<std::string>();
      pc.coefficients = table_from(j.at("coefficients"));
      pc.objective = j.at("objective").get<double>();
      pc.kkt = kkt_from(j.at("kkt"));
      if (!j.at("dual_gap").is_null()) pc.dual_gap = j["dual_gap"].get<double>();
      if (!j.at("diagnostics").is_null()) pc.diagnostics = gap_from(j["diagnostics"]);
      r.pc = std::move(pc);
    }
    if (!j.at("sampling").is_null()) {
      const json& sj = j["sampling"];
      McDetails mc;
      mc.seed = sj.at("seed").get<std::uint64_t>();
      mc.samples = sj.at("samples").get<std::size_t>();
      mc.used = sj.at("used").get<std::size_t>();
      mc.excluded = sj.at("excluded").get<std::size_t>();
      mc.min = sj.at("min").get<std::vector<double>>();
      mc.max = sj.at("max").get<std::vector<double>>();
      mc.std_error = sj.at("std_error").get<std::vector<double>>();
      r.mc = std::move(mc);
    }
    r.iterations = j.at("solver").at("iterations").get<std::size_t>();
    r.converged = j.at("solver").at("converged").get<bool>();
    r.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

bool RunReport::operator==(const RunReport& other) const { return to_json(*this) == to_json(other); }

std::string deterministic_dump(const RunReport& report) {
  json j = to_json(report);
  j.erase("timing");
  return j.dump();
}

RunReport run_pc(const StochasticProblem& prob, const std::string& name, const PcRunOptions& opts,
                 const std::vector<Metric>& metrics) {
  const auto t0 = std::chrono::steady_clock::now();
  check_moment_order(opts.max_moment);
  prob.validate();
  const std::size_t nodes = opts.quad_nodes == 0 ? default_node_count(opts.order) : opts.quad_nodes;
  Basis basis(prob.families(), opts.order);
  DeterministicProblem dp(prob, basis, problem_rule(prob, nodes), opts.mode);

  SolveOptions so = opts.solve;
  so.initial_point = coefficient_start(opts.start, prob.d(), dp.terms());
  const SolveResult res = solve(dp, so);

  RunReport r;
  r.problem = digest(prob, name);
  r.method = "pc";
  const Expansion exp = dp.expansion(res.a);
  const MomentSummary mom = moments(exp, opts.max_moment);
  r.mean = mom.mean;
  r.std = mom.std;
  r.central = mom.central;
  r.metrics = summarize_pc_metrics(exp, metrics);

  PcDetails pc;
  for (auto f : basis.families()) pc.families.emplace_back(family_name(f));
  pc.order = opts.order;
  pc.nodes_per_dim = nodes;
  pc.quad_size = dp.rule().size();
  pc.mode = std::string(mode_name(opts.mode));
  for (std::size_t i = 0; i < prob.d(); ++i) {
    const auto row = exp.row(i);
    pc.coefficients.emplace_back(row.begin(), row.end());
  }
  pc.objective = dp.sense_sign() * res.objective;
  pc.kkt = res.kkt;
  if (dp.num_inequalities() + dp.num_equalities() > 0) {
    try {
      pc.dual_gap = dual_gap(dp, res, so);
    } catch (const SolveError&) {
      pc.dual_gap.reset();
    }
  }
  if (opts.diagnostics) {
    GapBoundOptions g;
    g.seed = opts.diagnostics_seed;
    g.mode = opts.mode;
    SolveOptions inner = opts.solve;
    inner.initial_point.clear();
    pc.diagnostics = interchange_gap_bound(prob, problem_rule(prob, nodes), opts.start, inner, g);
  }
  r.pc = std::move(pc);
  r.iterations = res.iterations;
  r.converged = res.converged;
  r.wall_seconds = seconds_since(t0);
  return r;
}

RunReport run_mc(const StochasticProblem& prob, const std::string& name, const McRunOptions& opts,
                 const std::vector<Metric>& metrics, McResult* raw) {
  const auto t0 = std::chrono::steady_clock::now();
  check_moment_order(opts.max_moment);
  if (opts.samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  prob.validate();
  std::vector<double> start = opts.start.empty() ? std::vector<double>(prob.d(), 0.0) : opts.start;
  if (start.size() != prob.d()) throw InputError("start point length does not match the decision count");
  SolveOptions so = opts.solve;
  so.initial_point.clear();
  McResult res = mc_solve(prob, opts.samples, opts.seed, start, so, opts.workers);

  RunReport r;
  r.problem = digest(prob, name);
  r.method = "mc";
  r.mean = res.stats.mean;
  r.std = res.stats.std;
  r.central = sample_central(res, res.stats.mean, opts.max_moment);
  for (const Metric& m : metrics) {
    std::vector<std::vector<double>> rows(res.optimum.size(), std::vector<double>(1, 0.0));
    for (std::size_t s = 0; s < res.optimum.size(); ++s) {
      if (!res.converged[s]) continue;
      double acc = 0.0;
      for (std::size_t i = 0; i < m.weights.size(); ++i) acc += m.weights[i] * res.optimum[s][i];
      rows[s][0] = m.scale * acc;
    }
    const SampleStats st = sample_stats(rows, res.converged);
    r.metrics.push_back({m.name, st.mean[0], st.std[0]});
  }
  McDetails mc;
  mc.seed = opts.seed;
  mc.samples = opts.samples;
  mc.used = res.stats.n;
  mc.excluded = res.stats.excluded;
  mc.min = res.stats.min;
  mc.max = res.stats.max;
  mc.std_error = res.stats.std_error;
  r.mc = std::move(mc);
  r.iterations = 0;
  r.converged = true;  // exclusions beyond the allowance already threw
  r.wall_seconds = seconds_since(t0);
  if (raw) *raw = std::move(res);
  return r;
}

PcRunOptions pc_options(const ExampleConfig& config) {
  PcRunOptions o;
  o.order = config.order;
  o.quad_nodes = config.quad_nodes;
  o.mode = config.mode;
  o.start = config.start;
  return o;
}

McRunOptions mc_options(const ExampleConfig& config, std::size_t samples, std::uint64_t seed) {
  McRunOptions o;
  o.samples = samples;
  o.seed = seed;
  o.start = config.start;
  return o;
}

}  // namespace pcopt
