#pragma once

#include "core/vec.hpp"

namespace wkam {

// Uniform velocity lattice on [-qmax, qmax]^d with an odd point count per
// axis so that q = 0 is always a node. Truncation is a hard boundary: atoms
// never silently clip, a q outside the box is an error naming the radius
// that would have been needed.
struct VelocityGrid {
  int d = 1;
  int nq = 17;
  double qmax = 1.0;
  double hq = 0.125;

  int count() const { return d == 1 ? nq : nq * nq; }
  Vec qnode(int flat) const;
  int zero_node() const;
  int nearest(const Vec& q) const;  // throws on |q|_inf > qmax (+ half cell)
};

VelocityGrid make_velocity_grid(int d, int nq, double qmax);

}  // namespace wkam
