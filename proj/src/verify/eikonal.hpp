#pragma once

#include <vector>

#include "core/potential.hpp"
#include "grid/grid.hpp"

namespace wkam {

// Closed-form stationary solutions for the quadratic family with a
// component-constant potential on d = 1: w(x) = min over anchors a of the
// weighted periodic distance  min over the two arcs of  int sqrt(2 f).
// Every component carries the same w, so the coupling term vanishes and
// each component solves |w'|^2/2 = f up to O(h) away from kinks.
// Anchors must sit in the zero set of f; components of f must agree.
GridFunction eikonal_solutions(const Potential& f, const std::vector<int>& anchor_nodes,
                               const PeriodicGrid& grid);

// Weighted periodic distance profile from a single anchor (helper/oracle).
std::vector<double> weighted_distance(const Potential& f, int anchor_node,
                                      const PeriodicGrid& grid);

}  // namespace wkam
