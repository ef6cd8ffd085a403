#pragma once

#include <vector>

#include "evolve/cauchy.hpp"

namespace wkam {

// Nonnegative unit-mass density transported backward from a terminal Dirac
// mass by the exact transpose of the linearized forward update around u2.
struct AdjointDensity {
  PeriodicGrid grid;
  double eps = 1.0;
  double dt = 0.0;
  int x0_node = 0;
  int comp = 0;  // 0-based terminal component
  int stride = 1;
  std::vector<double> times;  // increasing
  std::vector<int> steps;     // aligned with the u2 slab's step indices
  std::vector<GridFunction> frames;

  double min_before_clip = 0.0;
  double clip_total = 0.0;
  double max_mass_drift = 0.0;

  double frame_mass(int j) const;  // h^d * sum of frame j
};

struct AdjointOptions {
  int store_every = 0;          // 0: aim at ~100 stored frames
  bool drop_diffusion = false;  // test hook: omit the eps^4 term
};

// u2 must be densely stored (stride 1) on the same grid with the same eps.
AdjointDensity solve_adjoint(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                             double eps, const TimeSlab& u2, int x0_node, int comp,
                             const AdjointOptions& opts = {});

// One explicit step of the linearization of the forward flow around u2frame:
//   w <- w - (dt/eps) [ b . D_upwind w + Theta w - eps^4 Lap w ],
// with b = D_p H(x, D_central u2, i) split upwind per axis. The adjoint
// advances with the exact transpose, so the discrete pairing
// h^d sum w sigma is conserved step by step.
GridFunction linearized_forward_step(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                     double eps, double dt, const GridFunction& u2frame,
                                     const GridFunction& w, bool drop_diffusion = false);

GridFunction adjoint_backward_step(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                   double eps, double dt, const GridFunction& u2frame,
                                   const GridFunction& sigma, bool drop_diffusion = false);

// Discrete pairing h^d sum_{x,i} a b.
double pairing(const GridFunction& a, const GridFunction& b);

// Max over stored frames/nodes/components of the convexity transfer defect
//   eps d_t(u1-u2) + D_pH(x, D u2, i) . D(u1-u2) + Theta(u1-u2)
//     - eps^4 Lap(u1-u2)
// with central gradients; nonpositive up to O(h) when both slabs solve the
// regularized problem with a convex Hamiltonian.
double convexity_defect(const HamiltonianView& h, const CouplingMatrix& coupling,
                        const TimeSlab& u1, const TimeSlab& u2, double eps);

}  // namespace wkam
