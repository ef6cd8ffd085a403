#include "verify/comparison.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wkam {

DiscreteMeasure example_measure(const PeriodicGrid& grid, const VelocityGrid& vgrid, int x0_node,
                                const Potential* f) {
  if (x0_node < 0 || x0_node >= grid.nodes())
    throw std::invalid_argument("example_measure: node out of range");
  if (f) {
    const Vec x0 = grid.coords(x0_node);
    for (int i = 1; i <= grid.m; ++i)
      if (f->value(x0, i) > 1e-10)
        throw std::invalid_argument(
            "example_measure: x0 is not in the common zero set of the potential");
  }
  DiscreteMeasure mu(grid, vgrid);
  const int q0 = vgrid.zero_node();
  for (int i = 0; i < grid.m; ++i)
    mu.w[mu.index(x0_node, q0, i)] = 1.0 / grid.m;
  return mu;
}

double integrate_against(const GridFunction& v, const DiscreteMeasure& mu) {
  if (!v.grid.same_layout(mu.grid))
    throw std::invalid_argument("integrate_against: grid mismatch");
  double s = 0.0;
  for (int node = 0; node < mu.grid.nodes(); ++node)
    for (int qn = 0; qn < mu.vgrid.count(); ++qn)
      for (int i = 0; i < mu.grid.m; ++i) {
        const double w = mu.w[mu.index(node, qn, i)];
        if (w != 0.0) s += w * v.at(node, i);
      }
  return s;
}

ComparisonReport check_comparison(const GridFunction& v1, const GridFunction& v2,
                                  const std::vector<DiscreteMeasure>& measures, double tol_hyp,
                                  double tol_con) {
  if (measures.empty()) throw std::invalid_argument("check_comparison: no measures given");
  if (!v1.grid.same_layout(v2.grid))
    throw std::invalid_argument("check_comparison: grid mismatch");

  ComparisonReport rep;
  rep.tol_hyp = tol_hyp;
  rep.tol_con = tol_con;
  rep.hypothesis_margin = std::numeric_limits<double>::infinity();
  for (const DiscreteMeasure& mu : measures) {
    const double i1 = integrate_against(v1, mu);
    const double i2 = integrate_against(v2, mu);
    rep.integrals_v1.push_back(i1);
    rep.integrals_v2.push_back(i2);
    rep.hypothesis_margin = std::min(rep.hypothesis_margin, i2 - i1);
  }
  rep.conclusion_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < v1.v.size(); ++k)
    rep.conclusion_margin = std::min(rep.conclusion_margin, v2.v[k] - v1.v[k]);

  rep.hypothesis_holds = rep.hypothesis_margin >= -tol_hyp;
  rep.conclusion_holds = rep.conclusion_margin >= -tol_con;
  rep.theorem_silent = !rep.hypothesis_holds;
  rep.pass = !rep.hypothesis_holds || rep.conclusion_holds;
  return rep;
}

UniquenessCheck uniqueness_set_check(const GridFunction& v1, const GridFunction& v2,
                                     const std::vector<std::pair<int, int>>& uniq_set, double tol,
                                     double tol_global) {
  if (uniq_set.empty()) throw std::invalid_argument("uniqueness_set_check: empty set");
  if (!v1.grid.same_layout(v2.grid))
    throw std::invalid_argument("uniqueness_set_check: grid mismatch");

  UniquenessCheck out;
  out.tol = tol;
  out.tol_global = tol_global;
  for (const auto& [node, i] : uniq_set)
    out.max_on_set = std::max(out.max_on_set, std::abs(v1.at(node, i) - v2.at(node, i)));
  for (size_t k = 0; k < v1.v.size(); ++k)
    out.max_global = std::max(out.max_global, std::abs(v1.v[k] - v2.v[k]));

  if (out.max_on_set > tol) {
    out.vacuous = true;  // premise fails; the implication asserts nothing
    out.held = true;
  } else {
    out.held = out.max_global <= tol_global;
  }
  return out;
}

}  // namespace wkam
