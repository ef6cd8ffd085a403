#include "mather/lp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

namespace {

double next_unit(std::mt19937_64& gen) { return (gen() >> 11) * 0x1.0p-53; }

DiscreteMeasure measure_from_weights(const HolonomyLP& lp, const std::vector<double>& x) {
  DiscreteMeasure mu(lp.grid, lp.vgrid);
  mu.w = x;
  mu.tidy();
  return mu;
}

}  // namespace

HolonomyLP assemble_lp(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                       const PeriodicGrid& grid, const VelocityGrid& vgrid,
                       size_t atom_budget) {
  spec.validate();
  if (spec.d != grid.d || spec.m != grid.m || vgrid.d != grid.d)
    throw std::invalid_argument("assemble_lp: dimension mismatch");
  const size_t atoms =
      static_cast<size_t>(grid.nodes()) * vgrid.count() * grid.m;
  if (atoms > atom_budget)
    throw BudgetError("assemble_lp: " + std::to_string(atoms) +
                      " atoms exceed the declared budget of " + std::to_string(atom_budget));

  HolonomyLP lp;
  lp.grid = grid;
  lp.vgrid = vgrid;
  lp.eta_vis = grid.h;
  const int test_rows = grid.nodes() * grid.m;
  lp.n_rows = test_rows + 1;
  lp.constraints.rows = lp.n_rows;
  lp.rhs.assign(static_cast<size_t>(lp.n_rows), 0.0);
  lp.rhs.back() = 1.0;

  // first pass: raw row magnitudes for the scaling
  std::vector<double> rows(static_cast<size_t>(test_rows), 0.0);
  std::vector<double> row_max(static_cast<size_t>(test_rows), 0.0);
  std::vector<std::pair<int32_t, double>> entries;
  for (int node = 0; node < grid.nodes(); ++node)
    for (int qn = 0; qn < vgrid.count(); ++qn)
      for (int i = 0; i < grid.m; ++i) {
        std::fill(rows.begin(), rows.end(), 0.0);
        accumulate_holonomy_rows(grid, vgrid, coupling, lp.eta_vis, node, qn, i, 1.0, rows);
        for (int r = 0; r < test_rows; ++r)
          row_max[r] = std::max(row_max[r], std::abs(rows[r]));
      }
  lp.row_scale.assign(static_cast<size_t>(lp.n_rows), 1.0);
  for (int r = 0; r < test_rows; ++r)
    lp.row_scale[r] = row_max[r] > 0.0 ? 1.0 / row_max[r] : 1.0;

  // second pass: scaled sparse columns, objective
  lp.obj.reserve(atoms);
  for (int node = 0; node < grid.nodes(); ++node) {
    const Vec x = grid.coords(node);
    for (int qn = 0; qn < vgrid.count(); ++qn) {
      const Vec q = vgrid.qnode(qn);
      for (int i = 0; i < grid.m; ++i) {
        lp.obj.push_back(eval_lagrangian(spec, x, q, i + 1));
        std::fill(rows.begin(), rows.end(), 0.0);
        accumulate_holonomy_rows(grid, vgrid, coupling, lp.eta_vis, node, qn, i, 1.0, rows);
        entries.clear();
        for (int r = 0; r < test_rows; ++r)
          if (rows[r] != 0.0) entries.emplace_back(r, rows[r] * lp.row_scale[r]);
        entries.emplace_back(test_rows, 1.0);  // mass row
        lp.constraints.add_column(entries);
      }
    }
  }
  return lp;
}

MatherLPResult solve_mather_lp(const HolonomyLP& lp, long max_iter) {
  auto res = RevisedSimplex::solve(lp.constraints, lp.obj, lp.rhs, max_iter);
  switch (res.status) {
    case RevisedSimplex::Status::kOptimal: break;
    case RevisedSimplex::Status::kInfeasible:
      throw InfeasibleError("mather LP infeasible: residual mass " +
                            std::to_string(res.infeasibility) + " on row " +
                            std::to_string(res.worst_row) +
                            " (holonomy rows inconsistent)");
    case RevisedSimplex::Status::kUnbounded:
      throw InternalError("mather LP unbounded; the action is bounded below on "
                          "normalized problems, so the assembly is inconsistent");
    case RevisedSimplex::Status::kIterLimit:
      throw DivergedError("mather LP hit the pivot limit");
  }
  MatherLPResult out;
  out.value = res.value;
  out.iterations = res.iterations;
  out.redundant_rows = res.redundant_rows;
  out.minimizer = measure_from_weights(lp, res.x);
  return out;
}

std::vector<DiscreteMeasure> sample_optimal_face(const HolonomyLP& lp,
                                                 const MatherLPResult& base, int k_samples,
                                                 uint64_t seed) {
  std::vector<DiscreteMeasure> out;
  out.push_back(base.minimizer);

  // augment with the optimal-value row, scaled like the others and flipped
  // if needed to keep the rhs nonnegative
  const double vstar = base.value;
  double obj_max = 0.0;
  for (double c : lp.obj) obj_max = std::max(obj_max, std::abs(c));
  const double scale = (vstar < 0.0 ? -1.0 : 1.0) / std::max(obj_max, 1e-30);
  RevisedSimplex::Matrix aug;
  aug.rows = lp.n_rows + 1;
  const int n_atoms = lp.constraints.cols();
  std::vector<std::pair<int32_t, double>> entries;
  for (int j = 0; j < n_atoms; ++j) {
    entries.clear();
    for (int32_t k = lp.constraints.col_ptr[j]; k < lp.constraints.col_ptr[j + 1]; ++k)
      entries.emplace_back(lp.constraints.row_idx[k], lp.constraints.val[k]);
    if (lp.obj[j] != 0.0) entries.emplace_back(lp.n_rows, scale * lp.obj[j]);
    aug.add_column(entries);
  }
  std::vector<double> rhs = lp.rhs;
  rhs.push_back(scale * vstar);

  std::mt19937_64 gen(seed);
  std::vector<double> c(static_cast<size_t>(n_atoms), 0.0);
  for (int s = 0; s < k_samples; ++s) {
    for (double& x : c) x = next_unit(gen);
    try {
      auto res = RevisedSimplex::solve(aug, c, rhs);
      if (res.status != RevisedSimplex::Status::kOptimal) continue;  // keep what we have
      out.push_back(measure_from_weights(lp, res.x));
    } catch (const InternalError&) {
      continue;  // a degenerate perturbation; the sampling is a heuristic
    }
  }
  return out;
}

std::vector<std::pair<int, int>> uniqueness_set(const std::vector<DiscreteMeasure>& measures,
                                                double mass_threshold) {
  if (measures.empty()) throw std::invalid_argument("uniqueness_set: no measures given");
  std::set<std::pair<int, int>> keep;
  for (const DiscreteMeasure& mu : measures) {
    const PeriodicGrid& g = mu.grid;
    const std::vector<double> marg = mu.space_marginal();
    for (int node = 0; node < g.nodes(); ++node)
      for (int i = 0; i < g.m; ++i)
        if (marg[static_cast<size_t>(node) * g.m + i] >= mass_threshold) {
          keep.insert({node, i});
          for (int k = 0; k < g.d; ++k) {
            keep.insert({g.neighbor(node, k, -1), i});
            keep.insert({g.neighbor(node, k, +1), i});
          }
        }
  }
  return {keep.begin(), keep.end()};
}

}  // namespace wkam
