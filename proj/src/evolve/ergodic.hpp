#pragma once

#include <vector>

#include "evolve/scheme.hpp"

namespace wkam {

struct ErgodicOptions {
  std::vector<double> alphas{1e-1, 1e-2, 1e-3};  // discount ladder, descending
  double tol = 1e-3;          // node-wise residual target of the discounted stages
  double polish_tol = 1e-9;   // residual target of the stationary refinement
  long max_sweeps = 50000;    // Gauss-Seidel sweeps per stage
  Dissipation dissipation = Dissipation::kLocal;
  double theta_override = 0.0;
  double crosscheck_horizon = 50.0;  // 0 disables the long-time-average cross-check
};

// Solution of the discrete ergodic system Hhat(v) + Theta v = lambda.
struct ErgodicSolution {
  double lambda = 0.0;           // from the stationary refinement
  GridFunction v;                // mean-zero representative
  double residual = 0.0;         // max |Hhat(v) + Theta v - lambda|
  double lambda_richardson = 0.0;  // extrapolated from the discount ladder
  double lambda_timeavg = 0.0;   // -u(T)/T of the undiscounted march
  double crosscheck_gap = 0.0;
  bool crosscheck_flagged = false;  // gap exceeded 10 * tol
  double theta = 0.0;
  std::vector<double> theta_field;  // converged dissipation per dof; v is
                                    // stationary for exactly this flux
  long iterations = 0;
};

// Discounted approximation (damped value iteration for each alpha, warm
// started down the ladder) followed by a stationary polish that pins lambda.
ErgodicSolution solve_ergodic(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                              const PeriodicGrid& grid, const ErgodicOptions& opts = {});

// Moves lambda into the shift so that re-solving yields an ergodic constant
// near zero.
HamiltonianSpec normalize_spec(const HamiltonianSpec& spec, double lambda);

}  // namespace wkam
