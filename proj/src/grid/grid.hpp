#pragma once

#include <vector>

#include "core/hamiltonian.hpp"
#include "core/vec.hpp"

namespace wkam {

// Uniform periodic lattice on the flat torus, d in {1,2}, n nodes per axis,
// mesh width h = 1/n, m components per node.
struct PeriodicGrid {
  int d = 1;
  int n = 8;
  int m = 1;
  double h = 0.125;

  int nodes() const { return d == 1 ? n : n * n; }
  int dofs() const { return nodes() * m; }

  Vec coords(int node) const {
    if (d == 1) return vec1(node * h);
    return vec2((node % n) * h, (node / n) * h);
  }

  // index of the node displaced by step (+1/-1) along axis, wrapped
  int neighbor(int node, int axis, int step) const;
  int node_at(int kx, int ky = 0) const;  // wrapped lattice index
  int nearest_node(const Vec& x) const;

  bool same_layout(const PeriodicGrid& o) const { return d == o.d && n == o.n && m == o.m; }
};

PeriodicGrid make_grid(int d, int n, int m);

struct GridFunction {
  PeriodicGrid grid;
  std::vector<double> v;  // node-major: v[node * m + comp]

  GridFunction() = default;
  explicit GridFunction(const PeriodicGrid& g, double fill = 0.0)
      : grid(g), v(static_cast<size_t>(g.dofs()), fill) {}

  double at(int node, int comp) const { return v[static_cast<size_t>(node) * grid.m + comp]; }
  double& at(int node, int comp) { return v[static_cast<size_t>(node) * grid.m + comp]; }

  double max_abs() const;
  double mean() const;
  bool finite() const;
};

// Backward/forward difference quotients per axis, wrapped periodically.
void one_sided_differences(const GridFunction& phi, int node, int comp, Vec& p_minus, Vec& p_plus);

// Central difference gradient (average of the one-sided quotients).
Vec central_gradient(const GridFunction& phi, int node, int comp);

// Standard (2d+1)-point periodic Laplacian.
GridFunction discrete_laplacian(const GridFunction& phi);

// Lax-Friedrichs flux: H(x, (p-+p+)/2, i) - (theta/2) sum_k (p+_k - p-_k).
// Monotone whenever theta dominates |D_p H| componentwise over the hull of
// the one-sided arguments.
double numerical_hamiltonian(const HamiltonianSpec& spec, const Vec& x, const Vec& p_minus,
                             const Vec& p_plus, int comp, double theta);

// Largest one-sided difference quotient over all nodes/components/axes.
double lipschitz_constant(const GridFunction& phi);

}  // namespace wkam
