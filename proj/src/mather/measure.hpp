#pragma once

#include <vector>

#include "core/coupling.hpp"
#include "core/hamiltonian.hpp"
#include "grid/grid.hpp"
#include "mather/velocity_grid.hpp"

namespace wkam {

// Nonnegative unit-mass weights on (x-node, q-node, component).
struct DiscreteMeasure {
  PeriodicGrid grid;
  VelocityGrid vgrid;
  std::vector<double> w;  // [(node * vgrid.count() + qn) * m + i]

  DiscreteMeasure() = default;
  DiscreteMeasure(const PeriodicGrid& g, const VelocityGrid& v)
      : grid(g), vgrid(v), w(static_cast<size_t>(g.nodes()) * v.count() * g.m, 0.0) {}

  size_t index(int node, int qn, int comp) const {
    return (static_cast<size_t>(node) * vgrid.count() + qn) * grid.m + comp;
  }
  double mass() const;
  void normalize();  // rescale to unit mass; throws on empty support
  // clamp FP dust (|w| <= 1e-12) to zero, renormalize, check invariants
  void tidy();

  // marginal mass per (node, comp)
  std::vector<double> space_marginal() const;
  std::vector<double> component_masses() const;
  int support_size(double tol = 0.0) const;
};

// integral of the Lagrangian: sum of w * L(x, q, i)
double action(const DiscreteMeasure& mu, const HamiltonianSpec& spec);

// Max absolute row value of the discrete holonomy constraints over the nodal
// indicator test basis: for a test function concentrated at (y, j),
//   row(y,j) = sum_atoms w [ q . D_c phi + Theta phi + eta |q| Lap_h phi ],
// with central differences and the vanishing-viscosity weight eta (default
// h). The |q| factor keeps rest atoms exactly holonomic while suppressing the
// checkerboard nullspace of the central rows.
double holonomy_residual(const DiscreteMeasure& mu, const CouplingMatrix& coupling,
                         double eta_vis = -1.0);

// Raw holonomy rows for one atom of unit weight, accumulated into `rows`
// (length grid.nodes() * m, row index = y * m + j). Shared by the residual
// and the LP assembly so the two never drift apart.
void accumulate_holonomy_rows(const PeriodicGrid& grid, const VelocityGrid& vgrid,
                              const CouplingMatrix& coupling, double eta_vis, int node, int qn,
                              int comp, double weight, std::vector<double>& rows);

}  // namespace wkam
