#include "grid/mollify.hpp"

#include <cmath>
#include <stdexcept>

namespace wkam {

namespace {

double bump(double r2) {
  // unnormalized standard mollifier profile on the unit ball
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

}  // namespace

GridFunction mollify(const GridFunction& phi, double delta, bool* fell_back) {
  if (!(delta > 0.0)) throw std::invalid_argument("mollify: width must be positive");
  const PeriodicGrid& g = phi.grid;
  if (fell_back) *fell_back = false;
  if (delta < 2.0 * g.h) {
    if (fell_back) *fell_back = true;
    return phi;
  }

  const int reach = static_cast<int>(std::floor(delta / g.h));
  struct Tap {
    int dx, dy;
    double w;
  };
  std::vector<Tap> taps;
  double total = 0.0;
  const int reach_y = (g.d == 2) ? reach : 0;
  for (int jy = -reach_y; jy <= reach_y; ++jy) {
    for (int jx = -reach; jx <= reach; ++jx) {
      const double r2 =
          (jx * g.h * jx * g.h + jy * g.h * jy * g.h) / (delta * delta);
      const double w = bump(r2);
      if (w > 0.0) {
        taps.push_back({jx, jy, w});
        total += w;
      }
    }
  }
  for (Tap& t : taps) t.w /= total;

  GridFunction out(g);
  for (int node = 0; node < g.nodes(); ++node) {
    const int kx = (g.d == 1) ? node : node % g.n;
    const int ky = (g.d == 1) ? 0 : node / g.n;
    for (int i = 0; i < g.m; ++i) {
      double s = 0.0;
      for (const Tap& t : taps) s += t.w * phi.at(g.node_at(kx + t.dx, ky + t.dy), i);
      out.at(node, i) = s;
    }
  }
  return out;
}

}  // namespace wkam
