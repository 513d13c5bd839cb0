#include "pcopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcopt/error.hpp"

namespace pcopt {

void SolveOptions::validate() const {
  if (!(grad_tol > 0.0) || !(feas_tol > 0.0)) throw InputError("solver tolerances must be positive");
  if (!(penalty_init > 0.0)) throw InputError("initial penalty must be positive");
  if (!(penalty_growth > 1.0)) throw InputError("penalty growth must exceed 1");
  if (max_iters == 0) throw InputError("max_iters must be at least 1");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Tolerated F increase, in ulps of max(1, |F|), for steps taken in the
// roundoff regime.
constexpr double kNoiseUlps = 64.0;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> start_point(const Nlp& nlp, const SolveOptions& opts) {
  if (opts.initial_point.empty()) return std::vector<double>(nlp.dim(), 0.0);
  if (opts.initial_point.size() != nlp.dim()) {
    throw InputError("initial point has " + std::to_string(opts.initial_point.size()) + " entries, expected " +
                     std::to_string(nlp.dim()));
  }
  return opts.initial_point;
}

struct BfgsOutcome {
  std::vector<double> x;
  double f = 0.0;
  double gnorm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Objective value, or +inf where it cannot be evaluated.
double safe_objective(const Nlp& nlp, std::span<const double> x) {
  try {
    const double f = nlp.objective(x);
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
}

// H_state, when given, carries the inverse Hessian approximation in and out
// so related problems can be warm started; empty means start from scratch.
BfgsOutcome bfgs(const Nlp& nlp, std::vector<double> x, double abs_tol, std::size_t max_iters,
                 std::vector<double>* history, std::vector<double>* H_state = nullptr) {
  const std::size_t n = x.size();
  std::vector<double> g(n);
  double f = nlp.gradient(x, g);
  if (!std::isfinite(f) || !all_finite(g)) throw NumericError("objective or gradient is not finite at the start point");
  if (history) history->push_back(f);

  std::vector<double> H;
  bool scaled = false;
  if (H_state && H_state->size() == n * n) {
    H = *H_state;
    scaled = true;
  } else {
    H.assign(n * n, 0.0);
  }

  std::vector<double> d(n), xn(n), gn(n), s(n), y(n), Hy(n);
  BfgsOutcome out;
  double gnorm = norm2(g);
  // True while H is an untested identity-based guess.
  bool fresh = !scaled;
  auto reset_to_gradient_scale = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    const double h0 = 1.0 / std::max(1.0, gnorm);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = h0;
    scaled = false;
    fresh = true;
  };
  if (!scaled) reset_to_gradient_scale();
  std::size_t it = 0;
  while (gnorm > abs_tol && it < max_iters) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc -= H[i * n + j] * g[j];
      d[i] = acc;
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      if (fresh) break;
      reset_to_gradient_scale();
      continue;
    }

    double t = 1.0;
    double fn = 0.0;
    bool accepted = false;
    bool have_gn = false;
    for (int halving = 0; halving < 60; ++halving) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
      fn = safe_objective(nlp, xn);
      // Strict decrease too: f + c t slope can round back to f.
      if (fn <= f + 1e-4 * t * slope && fn < f) {
        accepted = true;
        break;
      }
      // Near a minimizer the required decrease drops below the rounding
      // error of F, so F values are noise. Accept a step whose change stays
      // within that noise if it at least halves the directional derivative.
      const double scale = std::max(1.0, std::fabs(f));
      if (fn - f <= kNoiseUlps * kEps * scale && f - fn <= 1e-12 * scale) {
        nlp.gradient(xn, gn);
        if (all_finite(gn) && std::fabs(dot(gn, d)) <= 0.5 * std::fabs(slope)) {
          accepted = true;
          have_gn = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      // The curvature model is stale; retry from a scaled steepest-descent step.
      reset_to_gradient_scale();
      continue;
    }
    fresh = false;
    if (!have_gn) nlp.gradient(xn, gn);
    if (!all_finite(gn)) break;
    // Secant step on the directional derivative; exact for quadratics, which
    // gives BFGS its finite termination there. Kept only if F drops further.
    const double slope_t = dot(gn, d);
    if (!have_gn && std::fabs(slope_t) > 1e-6 * std::fabs(slope) && slope_t > slope) {
      const double ts = t * slope / (slope - slope_t);
      if (ts > 0.0 && ts <= 16.0 * t && ts != t) {
        for (std::size_t i = 0; i < n; ++i) s[i] = x[i] + ts * d[i];
        const double fs = safe_objective(nlp, s);
        if (fs < fn) {
          nlp.gradient(s, y);
          if (all_finite(y)) {
            xn.swap(s);
            gn.swap(y);
            fn = fs;
          }
        }
      }
    }
    ++it;

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-16 * norm2(s) * norm2(y) && sy > 0.0) {
      if (!scaled) {
        const double gamma = sy / dot(y, y);
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = gamma;
        scaled = true;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
        Hy[i] = acc;
      }
      const double yHy = dot(y, Hy);
      const double c1 = (sy + yHy) / (sy * sy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          H[i * n + j] += c1 * s[i] * s[j] - (Hy[i] * s[j] + s[i] * Hy[j]) / sy;
        }
      }
    }
    x.swap(xn);
    g.swap(gn);
    f = fn;
    gnorm = norm2(g);
    if (history) history->push_back(f);
  }
  if (H_state) *H_state = std::move(H);
  out.x = std::move(x);
  out.f = f;
  out.gnorm = gnorm;
  out.iterations = it;
  out.converged = gnorm <= abs_tol;
  return out;
}

// F + (1/2rho) sum(max(0, u + rho G)^2 - u^2) + v.H + (rho/2) |H|^2
class AugmentedLagrangian : public Nlp {
 public:
  AugmentedLagrangian(const Nlp& base, const std::vector<double>& u, const std::vector<double>& v, double rho)
      : base_(base), u_(u), v_(v), rho_(rho) {}

  std::size_t dim() const override { return base_.dim(); }

  double objective(std::span<const double> a) const override {
    std::vector<double> G(u_.size()), Hc(v_.size());
    base_.constraints(a, G, Hc);
    return base_.objective(a) + penalty(G, Hc);
  }

  double gradient(std::span<const double> a, std::span<double> g) const override {
    std::vector<double> G(u_.size()), Hc(v_.size());
    base_.constraints(a, G, Hc);
    const double f = base_.gradient(a, g);
    std::vector<double> ut(u_.size()), vt(v_.size());
    for (std::size_t i = 0; i < ut.size(); ++i) ut[i] = std::max(0.0, u_[i] + rho_ * G[i]);
    for (std::size_t j = 0; j < vt.size(); ++j) vt[j] = v_[j] + rho_ * Hc[j];
    std::vector<double> extra(g.size());
    base_.constraint_vjp(a, ut, vt, extra);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += extra[i];
    return f + penalty(G, Hc);
  }

 private:
  double penalty(const std::vector<double>& G, const std::vector<double>& Hc) const {
    double p = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
      const double t = std::max(0.0, u_[i] + rho_ * G[i]);
      p += (t * t - u_[i] * u_[i]) / (2.0 * rho_);
    }
    for (std::size_t j = 0; j < Hc.size(); ++j) p += v_[j] * Hc[j] + 0.5 * rho_ * Hc[j] * Hc[j];
    return p;
  }

  const Nlp& base_;
  const std::vector<double>& u_;
  const std::vector<double>& v_;
  double rho_;
};

// F + u.G + v.H with fixed multipliers.
class PlainLagrangian : public Nlp {
 public:
  PlainLagrangian(const Nlp& base, std::span<const double> u, std::span<const double> v)
      : base_(base), u_(u), v_(v) {}

  std::size_t dim() const override { return base_.dim(); }

  double objective(std::span<const double> a) const override {
    std::vector<double> G(u_.size()), Hc(v_.size());
    base_.constraints(a, G, Hc);
    return base_.objective(a) + dot(u_, G) + dot(v_, Hc);
  }

  double gradient(std::span<const double> a, std::span<double> g) const override {
    std::vector<double> G(u_.size()), Hc(v_.size());
    base_.constraints(a, G, Hc);
    const double f = base_.gradient(a, g);
    std::vector<double> extra(g.size());
    base_.constraint_vjp(a, u_, v_, extra);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += extra[i];
    return f + dot(u_, G) + dot(v_, Hc);
  }

 private:
  const Nlp& base_;
  std::span<const double> u_;
  std::span<const double> v_;
};

double initial_gradient_norm(const Nlp& nlp, std::span<const double> a) {
  std::vector<double> g(nlp.dim());
  const double f = nlp.gradient(a, g);
  if (!std::isfinite(f) || !all_finite(g)) throw NumericError("objective or gradient is not finite at the start point");
  return norm2(g);
}

}  // namespace

KKTReport kkt_residual(const Nlp& nlp, std::span<const double> a, std::span<const double> u,
                       std::span<const double> v) {
  if (a.size() != nlp.dim() || u.size() != nlp.num_inequalities() || v.size() != nlp.num_equalities()) {
    throw InputError("kkt_residual: dimension mismatch");
  }
  KKTReport r;
  std::vector<double> g(nlp.dim()), extra(nlp.dim());
  nlp.gradient(a, g);
  nlp.constraint_vjp(a, u, v, extra);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += extra[i];
  r.stationarity = norm2(g);
  std::vector<double> G(u.size()), H(v.size());
  nlp.constraints(a, G, H);
  for (std::size_t i = 0; i < G.size(); ++i) {
    r.feasibility = std::max(r.feasibility, std::max(G[i], 0.0));
    r.complementarity = std::max(r.complementarity, std::fabs(u[i] * G[i]));
    r.dual_sign = std::max(r.dual_sign, -u[i]);
  }
  for (double h : H) r.feasibility = std::max(r.feasibility, std::fabs(h));
  return r;
}

SolveResult minimize_unconstrained(const Nlp& nlp, const SolveOptions& opts) {
  opts.validate();
  std::vector<double> x0 = start_point(nlp, opts);
  const double tol = opts.grad_tol * (1.0 + initial_gradient_norm(nlp, x0));
  SolveResult res;
  BfgsOutcome o = bfgs(nlp, std::move(x0), tol, opts.max_iters, &res.history);
  res.a = std::move(o.x);
  res.u.assign(nlp.num_inequalities(), 0.0);
  res.v.assign(nlp.num_equalities(), 0.0);
  res.objective = o.f;
  res.iterations = o.iterations;
  res.kkt.stationarity = o.gnorm;
  if (nlp.num_inequalities() + nlp.num_equalities() > 0) res.kkt = kkt_residual(nlp, res.a, res.u, res.v);
  res.converged = o.converged;
  return res;
}

SolveResult minimize_constrained(const Nlp& nlp, const SolveOptions& opts) {
  const std::size_t m = nlp.num_inequalities();
  const std::size_t ne = nlp.num_equalities();
  if (m + ne == 0) return minimize_unconstrained(nlp, opts);
  opts.validate();

  std::vector<double> a = start_point(nlp, opts);
  const double tol = opts.grad_tol * (1.0 + initial_gradient_norm(nlp, a));
  std::vector<double> u(m, 0.0), v(ne, 0.0), G(m), H(ne);
  double rho = opts.penalty_init;
  double prev_violation = std::numeric_limits<double>::infinity();

  SolveResult res;
  std::vector<double> H_state;
  for (std::size_t outer = 0; outer < opts.al_outer_iters; ++outer) {
    AugmentedLagrangian al(nlp, u, v, rho);
    BfgsOutcome o = bfgs(al, a, tol, opts.max_iters, &res.history, &H_state);
    a = std::move(o.x);
    res.iterations += o.iterations;

    nlp.constraints(a, G, H);
    double violation = 0.0;
    for (std::size_t i = 0; i < m; ++i) violation = std::max(violation, std::fabs(std::max(G[i], -u[i] / rho)));
    for (std::size_t j = 0; j < ne; ++j) violation = std::max(violation, std::fabs(H[j]));
    for (std::size_t i = 0; i < m; ++i) u[i] = std::max(0.0, u[i] + rho * G[i]);
    for (std::size_t j = 0; j < ne; ++j) v[j] = v[j] + rho * H[j];

    const KKTReport k = kkt_residual(nlp, a, u, v);
    if (k.stationarity <= tol && k.feasibility <= opts.feas_tol && violation <= opts.feas_tol) break;
    if (violation > opts.feas_tol && violation > 0.25 * prev_violation) {
      rho = std::min(rho * opts.penalty_growth, 1e12);
      H_state.clear();
    }
    prev_violation = violation;
  }

  res.kkt = kkt_residual(nlp, a, u, v);
  res.objective = nlp.objective(a);
  res.a = std::move(a);
  res.u = std::move(u);
  res.v = std::move(v);
  res.converged = res.kkt.stationarity <= tol && res.kkt.feasibility <= opts.feas_tol;
  return res;
}

SolveResult solve(const Nlp& nlp, const SolveOptions& opts) {
  if (nlp.num_inequalities() + nlp.num_equalities() == 0) return minimize_unconstrained(nlp, opts);
  return minimize_constrained(nlp, opts);
}

double dual_gap(const Nlp& nlp, const SolveResult& result, const SolveOptions& opts) {
  if (nlp.num_inequalities() + nlp.num_equalities() == 0) return 0.0;
  PlainLagrangian lag(nlp, result.u, result.v);
  SolveOptions inner = opts;
  inner.initial_point = result.a;
  const double tol = inner.grad_tol * (1.0 + initial_gradient_norm(lag, result.a));
  BfgsOutcome o = bfgs(lag, result.a, tol, inner.max_iters, nullptr);
  if (!std::isfinite(o.f) || o.f < -1e12) throw SolveError("dual function is unbounded below at the final multipliers");
  if (!o.converged) throw SolveError("inner minimization of the Lagrangian did not converge");
  return nlp.objective(result.a) - o.f;
}

std::string_view stationary_kind_name(StationaryKind kind) {
  switch (kind) {
    case StationaryKind::minimum:
      return "minimum";
    case StationaryKind::maximum:
      return "maximum";
    case StationaryKind::saddle:
      return "saddle";
    case StationaryKind::degenerate:
      return "degenerate";
  }
  return "degenerate";
}

StationaryPoint classify_stationary_point(const Expression& f, const Expression& h, double x, double v) {
  auto ids = f.identifiers();
  for (const auto& id : h.identifiers()) ids.insert(id);
  if (ids.size() > 1) throw InputError("classify_stationary_point: expressions must share a single variable");
  const std::string name = ids.empty() ? std::string("x") : *ids.begin();

  auto d1 = [&](const Expression& e, double at) { return grad_expr(e, name, Environment{{name, at}}); };
  const double dh = d1(h, x);
  const double residual = d1(f, x) + v * dh;
  if (std::fabs(residual) > 1e-6) {
    throw InputError("classify_stationary_point: point is not stationary (residual " + std::to_string(residual) + ")");
  }
  constexpr double step = 1e-5;
  auto d2 = [&](const Expression& e) { return (d1(e, x + step) - d1(e, x - step)) / (2.0 * step); };
  const double j11 = d2(f) + v * d2(h);

  StationaryPoint sp;
  sp.dh = dh;
  // Symmetric [[j11, dh], [dh, 0]].
  const double half_tr = 0.5 * j11;
  const double disc = std::sqrt(half_tr * half_tr + dh * dh);
  sp.eigenvalues = {half_tr - disc, half_tr + disc};
  sp.product = sp.eigenvalues[0] * sp.eigenvalues[1];
  if (std::fabs(dh) < 1e-8) {
    sp.kind = StationaryKind::degenerate;
  } else if (sp.product < -1e-8) {
    sp.kind = StationaryKind::saddle;
  } else if (sp.eigenvalues[0] > 0.0) {
    sp.kind = StationaryKind::minimum;
  } else if (sp.eigenvalues[1] < 0.0) {
    sp.kind = StationaryKind::maximum;
  } else {
    sp.kind = StationaryKind::degenerate;
  }
  return sp;
}

}  // namespace pcopt
