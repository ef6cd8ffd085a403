#pragma once

#include <vector>

#include "evolve/scheme.hpp"

namespace wkam {

// Frames of a time-dependent grid function on t in [0,1], stored every
// `stride` solver steps (first and last always included).
struct TimeSlab {
  PeriodicGrid grid;
  double eps = 1.0;
  double dt = 0.0;       // solver step; frame spacing is stride * dt
  int stride = 1;
  int total_steps = 0;
  double theta = 0.0;    // dissipation bound behind the CFL choice
  std::vector<double> times;
  std::vector<int> steps;  // global step index of each frame
  std::vector<GridFunction> frames;

  const GridFunction& at_step(int step) const;  // requires stride == 1
};

struct CauchyOptions {
  double cfl_safety = 0.5;
  int store_every = 0;  // 0: aim at ~100 stored frames; 1: every step
  // Frozen dissipation field, usually the one the ergodic solve converged to
  // so that its v is an exact discrete steady state of this march. Empty
  // falls back to the global bound. Transients that outgrow the field lift
  // the coefficient locally to stay monotone.
  std::vector<double> theta_field;
  double theta_override = 0.0;
  size_t memory_budget_doubles = 200u * 1000u * 1000u;  // guard for dense storage
};

// eps u_t + H(x, Du, i) + Theta u = eps^4 Lap u, explicit monotone march on
// t in [0,1] from v_init (the caller mollifies its initial data; widths below
// resolution fall back to the identity there).
TimeSlab solve_cauchy_regularized(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                  double eps, const GridFunction& v_init,
                                  const CauchyOptions& opts = {});

// max_t || u(t) - ref ||_inf over stored frames
double slab_distance(const TimeSlab& slab, const GridFunction& ref);

}  // namespace wkam
