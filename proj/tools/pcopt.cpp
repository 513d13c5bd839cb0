// pcopt: polynomial chaos stochastic optimization from the command line.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcopt/builtin.hpp"
#include "pcopt/error.hpp"
#include "pcopt/problem.hpp"
#include "pcopt/report.hpp"

namespace {

using nlohmann::json;
using namespace pcopt;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotConverged = 2;

struct CommonFlags {
  std::string out;
  std::string start;
  unsigned moments = 4;
};

struct PcFlags {
  unsigned order = 1;
  std::size_t quad = 0;
  std::string mode = "expectation";
  bool diagnostics = false;
  std::size_t max_iters = 500;
};

struct McFlags {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string csv;
  unsigned workers = 0;
};

std::vector<double> parse_csv_point(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty entry in --start '" + text + "'");
    const std::string tok = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw InputError("invalid number '" + tok + "' in --start");
    }
    out.push_back(v);
  }
  return out;
}

std::uint64_t resolve_seed(const McFlags& mf) {
  if (mf.seed_given) return mf.seed;
  const char* env = std::getenv("PCOPT_SEED");
  if (!env || !*env) return 0;
  const std::string s(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("PCOPT_SEED is not an unsigned integer: '" + s + "'");
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
  if (!f) throw InputError("write failed for '" + path + "'");
}

void emit_json(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

std::string problem_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

PcRunOptions pc_run_options(const PcFlags& pf, const CommonFlags& cf) {
  PcRunOptions o;
  o.order = pf.order;
  o.quad_nodes = pf.quad;
  o.mode = mode_from_name(pf.mode);
  o.start = parse_csv_point(cf.start);
  o.max_moment = cf.moments;
  o.diagnostics = pf.diagnostics;
  o.solve.max_iters = pf.max_iters;
  return o;
}

McRunOptions mc_run_options(const McFlags& mf, const CommonFlags& cf) {
  McRunOptions o;
  o.samples = mf.samples;
  o.seed = resolve_seed(mf);
  o.start = parse_csv_point(cf.start);
  o.max_moment = cf.moments;
  o.workers = mf.workers;
  return o;
}

RunReport mc_with_csv(const StochasticProblem& prob, const std::string& name, const McRunOptions& o,
                      const std::vector<Metric>& metrics, const std::string& csv) {
  McResult raw;
  RunReport r = run_mc(prob, name, o, metrics, &raw);
  if (!csv.empty()) {
    std::ostringstream s;
    write_samples_csv(s, raw);
    write_text(csv, s.str());
  }
  return r;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << std::defaultfloat << x;
  return s.str();
}

// Side-by-side PC and MC statistics with absolute and relative differences.
void print_comparison(std::ostream& os, const RunReport& pc, const RunReport& mc) {
  struct Row {
    std::string label;
    double a, b;
  };
  std::vector<Row> rows;
  const auto& names = pc.problem.decisions;
  for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({"mean " + names[i], pc.mean[i], mc.mean[i]});
  for (std::size_t i = 0; i < names.size(); ++i) rows.push_back({"std " + names[i], pc.std[i], mc.std[i]});
  for (std::size_t k = 0; k < pc.metrics.size() && k < mc.metrics.size(); ++k) {
    rows.push_back({"mean " + pc.metrics[k].name, pc.metrics[k].mean, mc.metrics[k].mean});
    rows.push_back({"std " + pc.metrics[k].name, pc.metrics[k].std, mc.metrics[k].std});
  }
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.label.size());
  os << std::left << std::setw(static_cast<int>(w)) << "quantity" << std::right << std::setw(14) << "pc"
     << std::setw(14) << "mc" << std::setw(14) << "abs_diff" << std::setw(14) << "rel_diff" << "\n";
  for (const auto& r : rows) {
    const double diff = std::fabs(r.a - r.b);
    const double denom = std::fabs(r.b);
    os << std::left << std::setw(static_cast<int>(w)) << r.label << std::right << std::setw(14) << fmt(r.a)
       << std::setw(14) << fmt(r.b) << std::setw(14) << fmt(diff) << std::setw(14)
       << (denom > 0.0 ? fmt(diff / denom) : std::string("-")) << "\n";
  }
  if (mc.mc) {
    os << "mc samples used " << mc.mc->used << " of " << mc.mc->samples << " (seed " << mc.mc->seed << ")\n";
  }
}

void print_summary(std::ostream& os, const RunReport& r) {
  os << r.method << " " << r.problem.name << ": ";
  for (std::size_t i = 0; i < r.mean.size() && i < 4; ++i) {
    os << (i ? ", " : "") << r.problem.decisions[i] << " mean " << fmt(r.mean[i]) << " std " << fmt(r.std[i]);
  }
  if (r.mean.size() > 4) os << ", ...";
  for (const auto& m : r.metrics) os << "; " << m.name << " " << fmt(m.mean) << " (std " << fmt(m.std) << ")";
  os << (r.converged ? "" : " [not converged]") << "\n";
}

int finish_single(const RunReport& r, const std::string& out) {
  emit_json(to_json(r), out);
  if (!out.empty()) print_summary(std::cout, r);
  return r.converged ? kOk : kNotConverged;
}

void add_common(CLI::App* cmd, CommonFlags& cf) {
  cmd->add_option("--start", cf.start, "Start point in decision space, comma separated");
  cmd->add_option("--out", cf.out, "Write the JSON report here instead of standard output");
  cmd->add_option("--moments", cf.moments, "Highest central moment to report (2..8)")->check(CLI::Range(2u, 8u));
}

void add_pc(CLI::App* cmd, PcFlags& pf, bool with_diagnostics) {
  cmd->add_option("--order", pf.order, "Expansion order r")->check(CLI::Range(0u, 12u));
  cmd->add_option("--quad", pf.quad, "Quadrature nodes per random dimension (default 2r+2)")->check(CLI::Range(1u, 64u));
  cmd->add_option("--mode", pf.mode, "Constraint enforcement")->check(CLI::IsMember({"expectation", "collocation"}));
  cmd->add_option("--max-iters", pf.max_iters, "Quasi-Newton iteration cap per solve")->check(CLI::Range(1u, 1000000u));
  if (with_diagnostics) cmd->add_flag("--diagnostics", pf.diagnostics, "Evaluate the interchange-gap bound");
}

void add_mc(CLI::App* cmd, McFlags& mf) {
  cmd->add_option("--samples", mf.samples, "Monte Carlo sample count (>= 2)");
  cmd->add_option("--seed", mf.seed, "Sampling seed (default $PCOPT_SEED, else 0)")->each([&mf](const std::string&) {
    mf.seed_given = true;
  });
  cmd->add_option("--csv", mf.csv, "Write per-sample optima as CSV");
  cmd->add_option("--workers", mf.workers, "Worker threads (0: all cores); results do not depend on it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic optimization by polynomial chaos expansion", "pcopt"};
  app.require_subcommand(1);

  std::string path;
  CommonFlags cf;
  PcFlags pf;
  McFlags mf;

  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file by polynomial chaos");
  solve_cmd->add_option("problem", path, "Problem file")->required();
  add_common(solve_cmd, cf);
  add_pc(solve_cmd, pf, true);

  auto* base_cmd = app.add_subcommand("baseline", "Monte Carlo baseline for a problem file");
  base_cmd->add_option("problem", path, "Problem file")->required();
  add_common(base_cmd, cf);
  add_mc(base_cmd, mf);

  auto* cmp_cmd = app.add_subcommand("compare", "Polynomial chaos and Monte Carlo side by side");
  cmp_cmd->add_option("problem", path, "Problem file")->required();
  add_common(cmp_cmd, cf);
  add_pc(cmp_cmd, pf, false);
  add_mc(cmp_cmd, mf);

  std::string example;
  int equilibrium = 1;
  std::string method = "pc";
  std::string grid = "himmelblau_grid.csv";
  auto* ex_cmd = app.add_subcommand("example", "Run a built-in example");
  ex_cmd->add_option("name", example, "quadratic, himmelblau or scheduling")
      ->required()
      ->check(CLI::IsMember({"quadratic", "himmelblau", "scheduling"}));
  ex_cmd->add_option("--equilibrium", equilibrium, "Himmelblau basin 1..4")->check(CLI::Range(1, 4));
  ex_cmd->add_option("--method", method, "pc, mc or both")->check(CLI::IsMember({"pc", "mc", "both"}));
  ex_cmd->add_option("--out", cf.out, "Write the JSON report here instead of standard output");
  ex_cmd->add_option("--moments", cf.moments, "Highest central moment to report (2..8)")->check(CLI::Range(2u, 8u));
  ex_cmd->add_flag("--diagnostics", pf.diagnostics, "Evaluate the interchange-gap bound");
  ex_cmd->add_option("--grid", grid, "Himmelblau cost-surface CSV (x1,x2,f); empty to skip");
  add_mc(ex_cmd, mf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pcopt: " << e.what() << "\n\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    std::cerr << (sub ? sub->help("pcopt") : app.help());
    return kInputError;
  }

  try {
    if (*solve_cmd) {
      const StochasticProblem prob = load_problem(path);
      const RunReport r = run_pc(prob, problem_name(path), pc_run_options(pf, cf));
      return finish_single(r, cf.out);
    }
    if (*base_cmd) {
      const StochasticProblem prob = load_problem(path);
      const RunReport r = mc_with_csv(prob, problem_name(path), mc_run_options(mf, cf), {}, mf.csv);
      return finish_single(r, cf.out);
    }
    if (*cmp_cmd) {
      const StochasticProblem prob = load_problem(path);
      const std::string name = problem_name(path);
      const RunReport pc = run_pc(prob, name, pc_run_options(pf, cf));
      const RunReport mc = mc_with_csv(prob, name, mc_run_options(mf, cf), {}, mf.csv);
      print_comparison(std::cout, pc, mc);
      if (!cf.out.empty()) emit_json({{"pc", to_json(pc)}, {"mc", to_json(mc)}}, cf.out);
      return kOk;
    }
    if (*ex_cmd) {
      const ExampleConfig config = example_by_name(example, equilibrium);
      if (example == "himmelblau" && !grid.empty()) {
        std::ostringstream s;
        write_himmelblau_grid(s);
        write_text(grid, s.str());
      }
      std::optional<RunReport> pc, mc;
      if (method != "mc") {
        PcRunOptions o = pc_options(config);
        o.max_moment = cf.moments;
        o.diagnostics = pf.diagnostics;
        pc = run_pc(config.problem, config.name, o, config.metrics);
      }
      if (method != "pc") {
        McRunOptions o = mc_options(config, mf.samples, resolve_seed(mf));
        o.max_moment = cf.moments;
        o.workers = mf.workers;
        mc = mc_with_csv(config.problem, config.name, o, config.metrics, mf.csv);
      }
      if (pc && mc) {
        print_comparison(std::cout, *pc, *mc);
        if (!cf.out.empty()) emit_json({{"pc", to_json(*pc)}, {"mc", to_json(*mc)}}, cf.out);
        return pc->converged ? kOk : kNotConverged;
      }
      return finish_single(pc ? *pc : *mc, cf.out);
    }
  } catch (const SolveError& e) {
    std::cerr << "pcopt: not converged: " << e.what() << "\n";
    return kNotConverged;
  } catch (const InputError& e) {
    std::cerr << "pcopt: error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericError& e) {
    std::cerr << "pcopt: numerical failure: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "pcopt: error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
