#pragma once

#include "grid/grid.hpp"

namespace wkam {

// Periodic convolution with the discretized standard bump
//   gamma^delta(y) = delta^{-d} gamma(y/delta),  gamma(y) ~ exp(-1/(1-|y|^2)),
// renormalized so the lattice weights sum to one. Constants are preserved and
// the discrete Lipschitz constant never increases. A kernel narrower than two
// cells (delta < 2h) is under-resolved; the input is returned unchanged and
// *fell_back, when given, is set.
GridFunction mollify(const GridFunction& phi, double delta, bool* fell_back = nullptr);

}  // namespace wkam
