#pragma once

#include "evolve/adjoint.hpp"
#include "mather/measure.hpp"

namespace wkam {

// Time-averaged occupation measure of the adjoint density: each stored frame
// contributes sigma * h^d * dt_quadrature at the momentum p = D_central u2,
// pushed forward to the velocity node nearest q = D_p H(x, p, i) and
// renormalized. The u2 slab must be densely stored so frames line up.
DiscreteMeasure measure_from_adjoint(const HamiltonianSpec& spec, const TimeSlab& u2,
                                     const AdjointDensity& sigma, const VelocityGrid& vgrid);

}  // namespace wkam
