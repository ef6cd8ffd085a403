#pragma once

#include <vector>

#include "core/coupling.hpp"
#include "core/hamiltonian.hpp"
#include "grid/grid.hpp"

namespace wkam {

// Dissipation rule for the Lax-Friedrichs flux. kGlobal uses the a-priori
// bound theta everywhere. kLocal freezes a per-dof coefficient field that an
// outer continuation relaxes toward the local slope bounds; the frozen field
// keeps every inner iteration monotone while staying sharp at critical
// points, where a uniform theta would bias the ergodic constant by O(theta h).
enum class Dissipation { kLocal, kGlobal };

struct SchemeContext {
  const HamiltonianSpec* spec = nullptr;
  const CouplingMatrix* coupling = nullptr;
  PeriodicGrid grid;
  std::vector<double> f;      // potential cache per dof
  double theta_global = 1.0;  // a-priori bound; drives the CFL step
  std::vector<double> theta;  // frozen dissipation per dof
  // Time marching raises the coefficient to the instantaneous slope bound
  // when transients outgrow the frozen field.
  bool adaptive_lift = false;
  double theta_raw_max = 0.0;  // diagnostics
};

SchemeContext make_scheme(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                          const PeriodicGrid& grid, double theta_override = 0.0);

// Smallest monotone coefficient for the flux at one dof: |D_p H| over the
// corner set of the one-sided arguments, floored at h.
double corner_theta(const HamiltonianSpec& spec, const Vec& p_minus, const Vec& p_plus, int comp,
                    double floor_value);

// Relax the frozen field toward 1.1x the local corner bound of v, never
// dropping below relax * previous value per step nor above theta_global.
// Returns the largest pointwise change.
double update_theta_field(SchemeContext& ctx, const GridFunction& v, double relax = 0.6);

// r = Hhat(u) + Theta u, the stationary part of the evolution operator.
// theta_eff, when given, receives the dissipation coefficient actually used
// per dof (field or lifted); damped sweeps must scale their step with it.
void stationary_residual(SchemeContext& ctx, const GridFunction& u, GridFunction& r,
                         std::vector<double>* theta_eff = nullptr);

// Global diagonal bound of the stationary operator (CFL scale).
double diagonal_scale(const SchemeContext& ctx);

// One Gauss-Seidel pass of exact nodal solves for
//   alpha v + Hhat(v) + Theta v = lambda,
// sweeping one of the 2^d lexicographic orders (the flux is linear in the
// center value, so each nodal solve is exact for frozen neighbors).
void gauss_seidel_sweep(SchemeContext& ctx, double alpha, double lambda, int direction,
                        GridFunction& v);

}  // namespace wkam
