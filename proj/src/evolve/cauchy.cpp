#include "evolve/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

const GridFunction& TimeSlab::at_step(int step) const {
  if (stride != 1) throw std::invalid_argument("slab: step access needs dense storage");
  if (step < 0 || step >= static_cast<int>(frames.size()))
    throw std::invalid_argument("slab: step index out of range");
  return frames[static_cast<size_t>(step)];
}

TimeSlab solve_cauchy_regularized(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                  double eps, const GridFunction& v_init,
                                  const CauchyOptions& opts) {
  if (!(eps > 0.0) || eps > 1.0)
    throw std::invalid_argument("cauchy: eps must lie in (0, 1]");
  SchemeContext ctx = make_scheme(spec, coupling, v_init.grid, opts.theta_override);
  if (!opts.theta_field.empty()) {
    if (opts.theta_field.size() != ctx.theta.size())
      throw std::invalid_argument("cauchy: dissipation field size mismatch");
    ctx.theta = opts.theta_field;
  }
  ctx.adaptive_lift = true;
  const PeriodicGrid& g = ctx.grid;
  if (!v_init.finite()) throw std::invalid_argument("cauchy: non-finite initial data");

  const double eps4 = eps * eps * eps * eps;
  const double row = coupling.max_row_sum();
  double bound = g.h / (2.0 * g.d * ctx.theta_global);
  bound = std::min(bound, g.h * g.h / (4.0 * g.d * eps4));
  if (row > 0.0) bound = std::min(bound, 1.0 / (2.0 * row));
  const double dt_target = eps * opts.cfl_safety * bound;
  const int total_steps = static_cast<int>(std::ceil(1.0 / dt_target));
  const double dt = 1.0 / total_steps;
  if (dt > eps * bound)
    throw DivergedError("cauchy: stability bound cannot be met");  // cannot happen

  TimeSlab slab;
  slab.grid = g;
  slab.eps = eps;
  slab.dt = dt;
  slab.total_steps = total_steps;
  slab.theta = ctx.theta_global;
  slab.stride = opts.store_every > 0
                    ? opts.store_every
                    : std::max(1, total_steps / 100);
  const size_t frame_count = static_cast<size_t>(total_steps / slab.stride) + 2;
  if (frame_count * static_cast<size_t>(g.dofs()) > opts.memory_budget_doubles)
    throw BudgetError("cauchy: dense frame storage exceeds the memory budget; "
                      "raise store_every or shrink the grid");
  slab.frames.reserve(frame_count);

  GridFunction u = v_init, r(g), lap(g);
  auto store = [&](int step) {
    slab.frames.push_back(u);
    slab.times.push_back(step * dt);
    slab.steps.push_back(step);
  };
  store(0);

  const double scale = dt / eps;
  for (int n = 0; n < total_steps; ++n) {
    stationary_residual(ctx, u, r);
    if (eps4 > 0.0) {
      lap = discrete_laplacian(u);
      for (size_t k = 0; k < u.v.size(); ++k) u.v[k] -= scale * (r.v[k] - eps4 * lap.v[k]);
    } else {
      for (size_t k = 0; k < u.v.size(); ++k) u.v[k] -= scale * r.v[k];
    }
    const int step = n + 1;
    if (step % slab.stride == 0 || step == total_steps) {
      if (!u.finite())
        throw DivergedError("cauchy: non-finite state at frame " +
                            std::to_string(slab.frames.size()));
      store(step);
    }
  }
  return slab;
}

double slab_distance(const TimeSlab& slab, const GridFunction& ref) {
  double worst = 0.0;
  for (const GridFunction& f : slab.frames) {
    for (size_t k = 0; k < f.v.size(); ++k)
      worst = std::max(worst, std::abs(f.v[k] - ref.v[k]));
  }
  return worst;
}

}  // namespace wkam
