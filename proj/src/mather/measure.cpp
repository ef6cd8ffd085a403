#include "mather/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

double DiscreteMeasure::mass() const {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

void DiscreteMeasure::normalize() {
  const double m = mass();
  if (!(m > 0.0)) throw InternalError("measure: cannot normalize empty support");
  for (double& x : w) x /= m;
}

void DiscreteMeasure::tidy() {
  for (double& x : w) {
    if (std::abs(x) <= 1e-12) x = 0.0;
    if (x < 0.0) throw InternalError("measure: negative weight beyond tolerance");
  }
  normalize();
}

std::vector<double> DiscreteMeasure::space_marginal() const {
  std::vector<double> out(static_cast<size_t>(grid.nodes()) * grid.m, 0.0);
  for (int node = 0; node < grid.nodes(); ++node)
    for (int qn = 0; qn < vgrid.count(); ++qn)
      for (int i = 0; i < grid.m; ++i)
        out[static_cast<size_t>(node) * grid.m + i] += w[index(node, qn, i)];
  return out;
}

std::vector<double> DiscreteMeasure::component_masses() const {
  std::vector<double> out(static_cast<size_t>(grid.m), 0.0);
  for (int node = 0; node < grid.nodes(); ++node)
    for (int qn = 0; qn < vgrid.count(); ++qn)
      for (int i = 0; i < grid.m; ++i) out[i] += w[index(node, qn, i)];
  return out;
}

int DiscreteMeasure::support_size(double tol) const {
  int n = 0;
  for (double x : w)
    if (x > tol) ++n;
  return n;
}

double action(const DiscreteMeasure& mu, const HamiltonianSpec& spec) {
  if (spec.d != mu.grid.d || spec.m != mu.grid.m)
    throw std::invalid_argument("action: spec and measure dimensions disagree");
  double s = 0.0;
  for (int node = 0; node < mu.grid.nodes(); ++node) {
    const Vec x = mu.grid.coords(node);
    for (int qn = 0; qn < mu.vgrid.count(); ++qn) {
      const Vec q = mu.vgrid.qnode(qn);
      for (int i = 0; i < mu.grid.m; ++i) {
        const double weight = mu.w[mu.index(node, qn, i)];
        if (weight != 0.0) s += weight * eval_lagrangian(spec, x, q, i + 1);
      }
    }
  }
  return s;
}

void accumulate_holonomy_rows(const PeriodicGrid& grid, const VelocityGrid& vgrid,
                              const CouplingMatrix& coupling, double eta_vis, int node, int qn,
                              int comp, double weight, std::vector<double>& rows) {
  const int m = grid.m;
  const Vec q = vgrid.qnode(qn);
  const double qn2 = norm(q, grid.d);
  const double inv_2h = 1.0 / (2.0 * grid.h);
  const double visc = eta_vis * qn2 / (grid.h * grid.h);

  // gradient and viscosity rows live on the atom's own component
  for (int k = 0; k < grid.d; ++k) {
    const int up = grid.neighbor(node, k, +1);
    const int dn = grid.neighbor(node, k, -1);
    rows[static_cast<size_t>(up) * m + comp] += weight * (q[k] * inv_2h + visc);
    rows[static_cast<size_t>(dn) * m + comp] += weight * (-q[k] * inv_2h + visc);
  }
  rows[static_cast<size_t>(node) * m + comp] += weight * (-2.0 * grid.d * visc);

  // coupling rows: test at (node, j) sees c-weighted differences
  double own = 0.0;
  for (int j = 0; j < m; ++j) {
    if (j == comp) continue;
    own += coupling.at(comp, j);
    rows[static_cast<size_t>(node) * m + j] -= weight * coupling.at(comp, j);
  }
  rows[static_cast<size_t>(node) * m + comp] += weight * own;
}

double holonomy_residual(const DiscreteMeasure& mu, const CouplingMatrix& coupling,
                         double eta_vis) {
  if (coupling.m != mu.grid.m)
    throw std::invalid_argument("holonomy: coupling and measure components disagree");
  if (eta_vis < 0.0) eta_vis = mu.grid.h;
  std::vector<double> rows(static_cast<size_t>(mu.grid.nodes()) * mu.grid.m, 0.0);
  for (int node = 0; node < mu.grid.nodes(); ++node)
    for (int qn = 0; qn < mu.vgrid.count(); ++qn)
      for (int i = 0; i < mu.grid.m; ++i) {
        const double weight = mu.w[mu.index(node, qn, i)];
        if (weight != 0.0)
          accumulate_holonomy_rows(mu.grid, mu.vgrid, coupling, eta_vis, node, qn, i, weight,
                                   rows);
      }
  double worst = 0.0;
  for (double r : rows) worst = std::max(worst, std::abs(r));
  return worst;
}

}  // namespace wkam
