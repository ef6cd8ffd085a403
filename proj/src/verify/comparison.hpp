#pragma once

#include <vector>

#include "core/potential.hpp"
#include "mather/measure.hpp"

namespace wkam {

// Equal weights 1/m at (x0, q = 0, i) for every component. x0 must lie in
// the common zero set of f when a potential is supplied.
DiscreteMeasure example_measure(const PeriodicGrid& grid, const VelocityGrid& vgrid, int x0_node,
                                const Potential* f = nullptr);

// Comparison principle check: if  int v1 dmu <= int v2 dmu  for every tested
// measure (within tol_hyp), then v1 <= v2 pointwise (within tol_con). When
// the hypothesis fails the theorem is silent and no verdict is asserted.
struct ComparisonReport {
  double hypothesis_margin = 0.0;  // min over measures of int (v2 - v1) dmu
  double conclusion_margin = 0.0;  // min over (node, comp) of v2 - v1
  std::vector<double> integrals_v1;
  std::vector<double> integrals_v2;
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  bool theorem_silent = false;  // hypothesis failed: nothing to assert
  bool pass = false;            // hypothesis -> conclusion
  double tol_hyp = 0.0;
  double tol_con = 0.0;
};

ComparisonReport check_comparison(const GridFunction& v1, const GridFunction& v2,
                                  const std::vector<DiscreteMeasure>& measures, double tol_hyp,
                                  double tol_con);

// Agreement on the uniqueness set forces global agreement (within the larger
// tolerance). Vacuous when the pair already disagrees on the set.
struct UniquenessCheck {
  bool held = false;
  bool vacuous = false;
  double max_on_set = 0.0;
  double max_global = 0.0;
  double tol = 0.0;
  double tol_global = 0.0;
};

UniquenessCheck uniqueness_set_check(const GridFunction& v1, const GridFunction& v2,
                                     const std::vector<std::pair<int, int>>& uniq_set, double tol,
                                     double tol_global);

// int v dmu = sum of atom weight * v(x, i); the q coordinate is integrated out.
double integrate_against(const GridFunction& v, const DiscreteMeasure& mu);

}  // namespace wkam
