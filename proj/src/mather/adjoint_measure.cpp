#include "mather/adjoint_measure.hpp"

#include <cmath>
#include <stdexcept>

namespace wkam {

DiscreteMeasure measure_from_adjoint(const HamiltonianSpec& spec, const TimeSlab& u2,
                                     const AdjointDensity& sigma, const VelocityGrid& vgrid) {
  if (!u2.grid.same_layout(sigma.grid))
    throw std::invalid_argument("measure_from_adjoint: slab and density grids disagree");
  if (u2.eps != sigma.eps)
    throw std::invalid_argument("measure_from_adjoint: slab and density eps disagree");
  if (u2.stride != 1)
    throw std::invalid_argument("measure_from_adjoint: u2 must be stored at every step");
  if (vgrid.d != u2.grid.d)
    throw std::invalid_argument("measure_from_adjoint: velocity grid dimension mismatch");

  const PeriodicGrid& g = u2.grid;
  const double hd = std::pow(g.h, g.d);
  const size_t frames = sigma.frames.size();
  DiscreteMeasure mu(g, vgrid);

  for (size_t j = 0; j < frames; ++j) {
    // trapezoid weight of this frame within [0,1]
    const double t_lo = j == 0 ? sigma.times.front() : sigma.times[j - 1];
    const double t_hi = j + 1 == frames ? sigma.times.back() : sigma.times[j + 1];
    const double wt = 0.5 * (t_hi - t_lo);
    if (wt <= 0.0) continue;
    const GridFunction& frame = sigma.frames[j];
    const GridFunction& u2frame = u2.at_step(sigma.steps[j]);
    for (int node = 0; node < g.nodes(); ++node) {
      for (int i = 0; i < g.m; ++i) {
        const double contrib = frame.at(node, i) * hd * wt;
        if (contrib <= 0.0) continue;
        const Vec p = central_gradient(u2frame, node, i);
        const Vec q = kinetic_grad(spec, p, i + 1);  // inverse Legendre relabeling
        mu.w[mu.index(node, vgrid.nearest(q), i)] += contrib;
      }
    }
  }
  mu.normalize();
  return mu;
}

}  // namespace wkam
