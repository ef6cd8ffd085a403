#include "evolve/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace wkam {

namespace {

// Residual of the discounted equation after the sweep, with the constant
// mode solved exactly: a uniform shift of v by -mean/alpha removes the mean
// residual without touching the rest (the stationary operator is translation
// invariant).
double discounted_residual_step(SchemeContext& ctx, double alpha, GridFunction& v,
                                GridFunction& r) {
  stationary_residual(ctx, v, r);
  for (size_t k = 0; k < r.v.size(); ++k) r.v[k] += alpha * v.v[k];
  const double rm = r.mean();
  for (size_t k = 0; k < v.v.size(); ++k) v.v[k] -= rm / alpha;
  double res = 0.0;
  for (size_t k = 0; k < r.v.size(); ++k) res = std::max(res, std::abs(r.v[k] - rm));
  return res;
}

long discounted_stage(SchemeContext& ctx, double alpha, const ErgodicOptions& opts,
                      GridFunction& v) {
  GridFunction r(ctx.grid);
  const int dirs = 1 << ctx.grid.d;
  for (long sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    gauss_seidel_sweep(ctx, alpha, 0.0, static_cast<int>(sweep) % dirs, v);
    const double res = discounted_residual_step(ctx, alpha, v, r);
    if (!std::isfinite(res)) throw DivergedError("ergodic: discounted iteration diverged");
    if (res <= opts.tol) return sweep + 1;
  }
  throw DivergedError("ergodic: discounted stage hit the sweep cap at alpha = " +
                      std::to_string(alpha));
}

struct PolishResult {
  double lambda = 0.0;
  double residual = 0.0;
  long sweeps = 0;
};

// Stationary refinement: lambda is the mean residual, swept to zero.
PolishResult polish_stationary(SchemeContext& ctx, const ErgodicOptions& opts, GridFunction& v,
                               double target) {
  GridFunction r(ctx.grid);
  const int dirs = 1 << ctx.grid.d;
  PolishResult out;
  double best = std::numeric_limits<double>::infinity();
  long since_best = 0;
  for (long sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    stationary_residual(ctx, v, r);
    const double lam = r.mean();
    double res = 0.0;
    for (size_t k = 0; k < r.v.size(); ++k) res = std::max(res, std::abs(r.v[k] - lam));
    out.lambda = lam;
    out.residual = res;
    out.sweeps = sweep + 1;
    if (!std::isfinite(res)) throw DivergedError("ergodic: stationary refinement diverged");
    if (res <= target) break;
    if (res < 0.999 * best) {
      best = res;
      since_best = 0;
    } else if (++since_best > 200) {
      break;  // floor of the current frozen-field fixed point
    }
    gauss_seidel_sweep(ctx, 0.0, lam, static_cast<int>(sweep) % dirs, v);
  }
  const double mean = v.mean();
  for (double& x : v.v) x -= mean;
  return out;
}

double long_time_average(SchemeContext& ctx, const ErgodicOptions& opts) {
  // march u_t + Hhat(u) + Theta u = 0 to the horizon; lambda ~ -mean u(T)/T
  const double T = opts.crosscheck_horizon;
  const double dt_bound = 1.0 / (2.0 * diagonal_scale(ctx));
  const long steps = static_cast<long>(std::ceil(T / dt_bound));
  const double dt = T / static_cast<double>(steps);
  GridFunction u(ctx.grid), r(ctx.grid);
  for (long n = 0; n < steps; ++n) {
    stationary_residual(ctx, u, r);
    for (size_t k = 0; k < u.v.size(); ++k) u.v[k] -= dt * r.v[k];
  }
  if (!u.finite()) throw DivergedError("ergodic: long-time-average march diverged");
  return -u.mean() / T;
}

}  // namespace

ErgodicSolution solve_ergodic(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                              const PeriodicGrid& grid, const ErgodicOptions& opts) {
  if (opts.alphas.empty()) throw std::invalid_argument("ergodic: need at least one discount rate");
  SchemeContext ctx = make_scheme(spec, coupling, grid, opts.theta_override);
  // the lift keeps sweeps monotone while the field is mid-continuation
  ctx.adaptive_lift = true;

  ErgodicSolution sol;
  sol.theta = ctx.theta_global;
  GridFunction v(grid);
  std::vector<double> lambdas;
  for (double alpha : opts.alphas) {
    sol.iterations += discounted_stage(ctx, alpha, opts, v);
    lambdas.push_back(-alpha * v.mean());
  }
  if (lambdas.size() >= 2) {
    const double a2 = opts.alphas[opts.alphas.size() - 2];
    const double a3 = opts.alphas.back();
    sol.lambda_richardson =
        lambdas.back() + (lambdas.back() - lambdas[lambdas.size() - 2]) * a3 / (a2 - a3);
  } else {
    sol.lambda_richardson = lambdas.back();
  }

  PolishResult pol;
  if (opts.dissipation == Dissipation::kGlobal) {
    pol = polish_stationary(ctx, opts, v, opts.polish_tol);
    sol.iterations += pol.sweeps;
  } else {
    // continuation: relax the dissipation field toward the local slope bound,
    // re-polishing after each update so the flux and solution settle together
    for (int outer = 0; outer < 40; ++outer) {
      const double loose = std::max(opts.polish_tol, 1e-2 * opts.tol);
      pol = polish_stationary(ctx, opts, v, loose);
      sol.iterations += pol.sweeps;
      const double moved = update_theta_field(ctx, v);
      if (moved <= 0.02 * ctx.theta_global) break;
    }
    pol = polish_stationary(ctx, opts, v, opts.polish_tol);
    sol.iterations += pol.sweeps;
  }
  sol.lambda = pol.lambda;
  sol.residual = pol.residual;
  sol.theta_field = ctx.theta;
  sol.v = std::move(v);

  if (opts.crosscheck_horizon > 0.0) {
    sol.lambda_timeavg = long_time_average(ctx, opts);
    sol.crosscheck_gap = std::abs(sol.lambda_timeavg - sol.lambda);
    sol.crosscheck_flagged = sol.crosscheck_gap > 10.0 * opts.tol;
  }
  return sol;
}

HamiltonianSpec normalize_spec(const HamiltonianSpec& spec, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("normalize_spec: non-finite lambda");
  HamiltonianSpec out = spec;
  out.shift -= lambda;
  return out;
}

}  // namespace wkam
