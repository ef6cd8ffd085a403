#include "grid/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace wkam {

int PeriodicGrid::neighbor(int node, int axis, int step) const {
  if (d == 1) {
    int k = node + step;
    if (k < 0) k += n;
    if (k >= n) k -= n;
    return k;
  }
  int kx = node % n, ky = node / n;
  if (axis == 0) {
    kx += step;
    if (kx < 0) kx += n;
    if (kx >= n) kx -= n;
  } else {
    ky += step;
    if (ky < 0) ky += n;
    if (ky >= n) ky -= n;
  }
  return kx + n * ky;
}

int PeriodicGrid::node_at(int kx, int ky) const {
  auto wrap = [this](int k) {
    k %= n;
    return k < 0 ? k + n : k;
  };
  return d == 1 ? wrap(kx) : wrap(kx) + n * wrap(ky);
}

int PeriodicGrid::nearest_node(const Vec& x) const {
  const int kx = static_cast<int>(std::lround(wrap_unit(x[0]) / h));
  if (d == 1) return node_at(kx);
  const int ky = static_cast<int>(std::lround(wrap_unit(x[1]) / h));
  return node_at(kx, ky);
}

PeriodicGrid make_grid(int d, int n, int m) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("make_grid: unsupported dimension");
  if (n < 8) throw std::invalid_argument("make_grid: need at least 8 nodes per axis");
  if (m < 1) throw std::invalid_argument("make_grid: component count must be positive");
  PeriodicGrid g;
  g.d = d;
  g.n = n;
  g.m = m;
  g.h = 1.0 / n;
  return g;
}

double GridFunction::max_abs() const {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double GridFunction::mean() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

bool GridFunction::finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

void one_sided_differences(const GridFunction& phi, int node, int comp, Vec& p_minus, Vec& p_plus) {
  const PeriodicGrid& g = phi.grid;
  p_minus = {0.0, 0.0};
  p_plus = {0.0, 0.0};
  const double c = phi.at(node, comp);
  for (int k = 0; k < g.d; ++k) {
    const double lo = phi.at(g.neighbor(node, k, -1), comp);
    const double hi = phi.at(g.neighbor(node, k, +1), comp);
    p_minus[k] = (c - lo) / g.h;
    p_plus[k] = (hi - c) / g.h;
  }
}

Vec central_gradient(const GridFunction& phi, int node, int comp) {
  const PeriodicGrid& g = phi.grid;
  Vec grad{0.0, 0.0};
  for (int k = 0; k < g.d; ++k) {
    const double lo = phi.at(g.neighbor(node, k, -1), comp);
    const double hi = phi.at(g.neighbor(node, k, +1), comp);
    grad[k] = (hi - lo) / (2.0 * g.h);
  }
  return grad;
}

GridFunction discrete_laplacian(const GridFunction& phi) {
  const PeriodicGrid& g = phi.grid;
  GridFunction out(g);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (int node = 0; node < g.nodes(); ++node) {
    for (int i = 0; i < g.m; ++i) {
      double s = 0.0;
      for (int k = 0; k < g.d; ++k) {
        s += phi.at(g.neighbor(node, k, -1), i) - 2.0 * phi.at(node, i) +
             phi.at(g.neighbor(node, k, +1), i);
      }
      out.at(node, i) = s * inv_h2;
    }
  }
  return out;
}

double numerical_hamiltonian(const HamiltonianSpec& spec, const Vec& x, const Vec& p_minus,
                             const Vec& p_plus, int comp, double theta) {
  Vec mid{0.0, 0.0};
  double spread = 0.0;
  for (int k = 0; k < spec.d; ++k) {
    mid[k] = 0.5 * (p_minus[k] + p_plus[k]);
    spread += p_plus[k] - p_minus[k];
  }
  return eval_hamiltonian(spec, x, mid, comp) - 0.5 * theta * spread;
}

double lipschitz_constant(const GridFunction& phi) {
  const PeriodicGrid& g = phi.grid;
  double s = 0.0;
  for (int node = 0; node < g.nodes(); ++node) {
    for (int i = 0; i < g.m; ++i) {
      for (int k = 0; k < g.d; ++k) {
        const double hi = phi.at(g.neighbor(node, k, +1), i);
        s = std::max(s, std::abs(hi - phi.at(node, i)) / g.h);
      }
    }
  }
  return s;
}

}  // namespace wkam
