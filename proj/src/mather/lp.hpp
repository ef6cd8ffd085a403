#pragma once

#include <cstdint>
#include <vector>

#include "mather/measure.hpp"
#include "mather/simplex.hpp"

namespace wkam {

// Linear program over discretized measures: minimize the action subject to
// the nodal holonomy rows and the unit mass row. Rows are scaled to unit max
// magnitude internally (the feasible set is unchanged); the mass row is last.
struct HolonomyLP {
  PeriodicGrid grid;
  VelocityGrid vgrid;
  double eta_vis = 0.0;
  int n_rows = 0;                    // test rows + mass row
  std::vector<double> obj;           // L per atom
  RevisedSimplex::Matrix constraints;
  std::vector<double> rhs;           // zeros + trailing 1
  std::vector<double> row_scale;
};

HolonomyLP assemble_lp(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                       const PeriodicGrid& grid, const VelocityGrid& vgrid,
                       size_t atom_budget = 2000000);

struct MatherLPResult {
  DiscreteMeasure minimizer;
  double value = 0.0;
  long iterations = 0;
  int redundant_rows = 0;
};

MatherLPResult solve_mather_lp(const HolonomyLP& lp, long max_iter = 200000);

// Vertices of (an inner approximation of) the optimal face: re-solve with
// random nonnegative objectives subject to the original rows plus the
// optimal-value row. The first entry is the unperturbed minimizer.
std::vector<DiscreteMeasure> sample_optimal_face(const HolonomyLP& lp,
                                                 const MatherLPResult& base, int k_samples,
                                                 uint64_t seed);

// Union of thresholded space marginals over the sampled measures, dilated by
// one grid cell per axis; entries are (node, comp) pairs, sorted.
std::vector<std::pair<int, int>> uniqueness_set(const std::vector<DiscreteMeasure>& measures,
                                                double mass_threshold);

}  // namespace wkam
