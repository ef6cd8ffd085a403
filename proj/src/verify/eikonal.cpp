#include "verify/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wkam {

std::vector<double> weighted_distance(const Potential& f, int anchor_node,
                                      const PeriodicGrid& grid) {
  const int n = grid.n;
  // composite trapezoid of sqrt(2 f) node-to-node, then arc minima
  std::vector<double> g(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) g[k] = std::sqrt(2.0 * f.value(vec1(k * grid.h), 1));
  std::vector<double> cum(static_cast<size_t>(n) + 1, 0.0);
  for (int k = 0; k < n; ++k)
    cum[k + 1] = cum[k] + 0.5 * (g[k] + g[(k + 1) % n]) * grid.h;
  const double total = cum[n];

  std::vector<double> dist(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    double fwd = cum[k] - cum[anchor_node];
    if (fwd < 0.0) fwd += total;
    dist[k] = std::min(fwd, total - fwd);
  }
  return dist;
}

GridFunction eikonal_solutions(const Potential& f, const std::vector<int>& anchor_nodes,
                               const PeriodicGrid& grid) {
  if (grid.d != 1)
    throw std::invalid_argument("eikonal_solutions: closed forms cover d = 1 only");
  if (anchor_nodes.empty()) throw std::invalid_argument("eikonal_solutions: no anchors");
  if (f.dim() != 1 || f.components() != grid.m)
    throw std::invalid_argument("eikonal_solutions: potential does not match the grid");

  for (int node = 0; node < grid.n; ++node) {
    const Vec x = vec1(node * grid.h);
    const double f1 = f.value(x, 1);
    for (int i = 2; i <= grid.m; ++i)
      if (std::abs(f.value(x, i) - f1) > 1e-12)
        throw std::invalid_argument(
            "eikonal_solutions: potential must be identical across components");
  }
  for (int a : anchor_nodes) {
    if (a < 0 || a >= grid.n) throw std::invalid_argument("eikonal_solutions: anchor off grid");
    if (f.value(vec1(a * grid.h), 1) > 1e-10)
      throw std::invalid_argument("eikonal_solutions: anchor is not in the zero set of f");
  }

  GridFunction w(grid, std::numeric_limits<double>::infinity());
  for (int a : anchor_nodes) {
    const std::vector<double> dist = weighted_distance(f, a, grid);
    for (int node = 0; node < grid.n; ++node)
      for (int i = 0; i < grid.m; ++i)
        w.at(node, i) = std::min(w.at(node, i), dist[static_cast<size_t>(node)]);
  }
  return w;
}

}  // namespace wkam
