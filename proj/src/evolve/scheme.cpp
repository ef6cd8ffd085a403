#include "evolve/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

SchemeContext make_scheme(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                          const PeriodicGrid& grid, double theta_override) {
  spec.validate();
  if (spec.d != grid.d || spec.m != grid.m)
    throw std::invalid_argument("scheme: spec and grid dimensions disagree");
  if (coupling.m != grid.m)
    throw std::invalid_argument("scheme: coupling and grid component counts disagree");

  SchemeContext ctx;
  ctx.spec = &spec;
  ctx.coupling = &coupling;
  ctx.grid = grid;
  ctx.theta_global = theta_override > 0.0 ? theta_override : a_priori_gradient_bound(spec).theta;
  ctx.theta.assign(static_cast<size_t>(grid.dofs()), ctx.theta_global);
  ctx.f.resize(static_cast<size_t>(grid.dofs()));
  for (int node = 0; node < grid.nodes(); ++node) {
    const Vec x = grid.coords(node);
    for (int i = 0; i < grid.m; ++i)
      ctx.f[static_cast<size_t>(node) * grid.m + i] = spec.potential.value(x, i + 1);
  }
  return ctx;
}

double corner_theta(const HamiltonianSpec& spec, const Vec& p_minus, const Vec& p_plus, int comp,
                    double floor_value) {
  double th = floor_value;
  if (spec.d == 1) {
    th = std::max(th, std::abs(kinetic_grad(spec, p_minus, comp)[0]));
    th = std::max(th, std::abs(kinetic_grad(spec, p_plus, comp)[0]));
  } else {
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy) {
        const Vec corner{cx ? p_plus[0] : p_minus[0], cy ? p_plus[1] : p_minus[1]};
        th = std::max(th, max_abs(kinetic_grad(spec, corner, comp), 2));
      }
  }
  return th;
}

double update_theta_field(SchemeContext& ctx, const GridFunction& v, double relax) {
  const PeriodicGrid& g = ctx.grid;
  double worst = 0.0;
  Vec pm, pp;
  for (int node = 0; node < g.nodes(); ++node) {
    for (int i = 0; i < g.m; ++i) {
      one_sided_differences(v, node, i, pm, pp);
      const double cand = 1.1 * corner_theta(*ctx.spec, pm, pp, i + 1, g.h);
      const size_t k = static_cast<size_t>(node) * g.m + i;
      const double next = std::min(ctx.theta_global, std::max(cand, relax * ctx.theta[k]));
      worst = std::max(worst, std::abs(next - ctx.theta[k]));
      ctx.theta[k] = next;
    }
  }
  return worst;
}

void stationary_residual(SchemeContext& ctx, const GridFunction& u, GridFunction& r,
                         std::vector<double>* theta_eff) {
  const PeriodicGrid& g = ctx.grid;
  const HamiltonianSpec& spec = *ctx.spec;
  const CouplingMatrix& c = *ctx.coupling;
  if (r.grid.dofs() != g.dofs()) r = GridFunction(g);
  if (theta_eff) theta_eff->assign(static_cast<size_t>(g.dofs()), ctx.theta_global);

  Vec pm, pp, mid;
  for (int node = 0; node < g.nodes(); ++node) {
    const double* un = &u.v[static_cast<size_t>(node) * g.m];
    for (int i = 0; i < g.m; ++i) {
      one_sided_differences(u, node, i, pm, pp);
      double spread = 0.0;
      mid = {0.0, 0.0};
      for (int k = 0; k < g.d; ++k) {
        mid[k] = 0.5 * (pm[k] + pp[k]);
        spread += pp[k] - pm[k];
      }
      const size_t dof = static_cast<size_t>(node) * g.m + i;
      double theta = ctx.theta[dof];
      if (ctx.adaptive_lift) {
        const double raw = corner_theta(spec, pm, pp, i + 1, 0.0);
        if (raw > ctx.theta_raw_max) ctx.theta_raw_max = raw;
        if (raw > 2.0 * ctx.theta_global)
          throw DivergedError("scheme: local slopes exceed twice the a-priori bound");
        theta = std::max(theta, raw);
      }
      if (theta_eff) (*theta_eff)[dof] = theta;
      double val = kinetic(spec, mid, i + 1) - ctx.f[dof] + spec.shift - 0.5 * theta * spread;
      double th = 0.0;
      for (int j = 0; j < g.m; ++j) {
        if (j == i) continue;
        th += c.at(i, j) * (un[i] - un[j]);
      }
      r.at(node, i) = val + th;
    }
  }
}

double diagonal_scale(const SchemeContext& ctx) {
  return 2.0 * ctx.grid.d * ctx.theta_global / ctx.grid.h + 2.0 * ctx.coupling->max_row_sum();
}

namespace {

int sweep_node(const PeriodicGrid& g, int direction, int idx) {
  if (g.d == 1) return (direction & 1) ? g.n - 1 - idx : idx;
  int kx = idx % g.n, ky = idx / g.n;
  if (direction & 1) kx = g.n - 1 - kx;
  if (direction & 2) ky = g.n - 1 - ky;
  return kx + g.n * ky;
}

}  // namespace

void gauss_seidel_sweep(SchemeContext& ctx, double alpha, double lambda, int direction,
                        GridFunction& v) {
  const PeriodicGrid& g = ctx.grid;
  const HamiltonianSpec& spec = *ctx.spec;
  const CouplingMatrix& c = *ctx.coupling;

  Vec pm, pp, mid;
  for (int idx = 0; idx < g.nodes(); ++idx) {
    const int node = sweep_node(g, direction, idx);
    double* vn = &v.v[static_cast<size_t>(node) * g.m];
    for (int i = 0; i < g.m; ++i) {
      one_sided_differences(v, node, i, pm, pp);
      double spread = 0.0;
      mid = {0.0, 0.0};
      for (int k = 0; k < g.d; ++k) {
        mid[k] = 0.5 * (pm[k] + pp[k]);
        spread += pp[k] - pm[k];
      }
      const size_t dof = static_cast<size_t>(node) * g.m + i;
      double theta = ctx.theta[dof];
      if (ctx.adaptive_lift) {
        const double raw = corner_theta(spec, pm, pp, i + 1, 0.0);
        if (raw > ctx.theta_raw_max) ctx.theta_raw_max = raw;
        if (raw > 2.0 * ctx.theta_global)
          throw DivergedError("scheme: local slopes exceed twice the a-priori bound");
        theta = std::max(theta, raw);
      }
      double row = 0.0, th = 0.0;
      for (int j = 0; j < g.m; ++j) {
        if (j == i) continue;
        row += c.at(i, j);
        th += c.at(i, j) * (vn[i] - vn[j]);
      }
      const double r = alpha * vn[i] + kinetic(spec, mid, i + 1) - ctx.f[dof] + spec.shift -
                       0.5 * theta * spread + th - lambda;
      const double diag = alpha + g.d * theta / g.h + row;
      vn[i] -= r / diag;
    }
  }
}

}  // namespace wkam
