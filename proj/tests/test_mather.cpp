#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "evolve/ergodic.hpp"
#include "grid/mollify.hpp"
#include "mather/adjoint_measure.hpp"
#include "mather/lp.hpp"
#include "verify/comparison.hpp"

using namespace wkam;

namespace {

HamiltonianSpec quadratic_spec(const std::string& f, int d, int m) {
  return HamiltonianSpec{Family::kQuadratic, Potential::from_expression(f, d, m), d, m, 0.0, {}};
}

struct Setup {
  HamiltonianSpec spec = quadratic_spec("sin(pi*x)^2", 1, 2);
  CouplingMatrix coupling = CouplingMatrix::from_rows({{0, 1}, {1, 0}});
  PeriodicGrid grid = make_grid(1, 32, 2);
  VelocityGrid vgrid = make_velocity_grid(1, 17, 3.0);
};

}  // namespace

TEST_CASE("velocity grid basics") {
  auto vg = make_velocity_grid(1, 17, 3.0);
  CHECK(vg.hq == doctest::Approx(0.375));
  CHECK(norm(vg.qnode(vg.zero_node()), 1) == 0.0);
  CHECK(vg.nearest(vec1(0.19)) == vg.zero_node() + 1);
  CHECK_THROWS_AS(vg.nearest(vec1(3.8)), std::invalid_argument);
  CHECK_THROWS_AS(make_velocity_grid(1, 16, 3.0), std::invalid_argument);  // even count
}

TEST_CASE("holonomy residual of the explicit measures") {
  Setup s;
  // rest measure split evenly over components: exactly holonomic
  auto mu = example_measure(s.grid, s.vgrid, 0, &s.spec.potential);
  CHECK(holonomy_residual(mu, s.coupling) <= 1e-12);
  CHECK(action(mu, s.spec) == 0.0);

  // skewed split a = 3/4 violates the coupling rows by |2a-1| = 1/2
  DiscreteMeasure skew(s.grid, s.vgrid);
  skew.w[skew.index(0, s.vgrid.zero_node(), 0)] = 0.75;
  skew.w[skew.index(0, s.vgrid.zero_node(), 1)] = 0.25;
  CHECK(holonomy_residual(skew, s.coupling) == doctest::Approx(0.5).epsilon(1e-12));

  // uniform rest measure over all nodes: translation symmetry cancels rows
  HamiltonianSpec flat = quadratic_spec("0", 1, 2);
  DiscreteMeasure uni(s.grid, s.vgrid);
  for (int node = 0; node < s.grid.nodes(); ++node)
    for (int i = 0; i < 2; ++i)
      uni.w[uni.index(node, s.vgrid.zero_node(), i)] = 1.0 / (2.0 * s.grid.nodes());
  CHECK(holonomy_residual(uni, s.coupling) <= 1e-12);
  CHECK(action(uni, flat) == 0.0);
}

TEST_CASE("action values") {
  Setup s;
  HamiltonianSpec flat = quadratic_spec("0", 1, 2);
  DiscreteMeasure point(s.grid, s.vgrid);
  // q = 1 sits on the lattice: hq = 0.375 misses it, so use q = 0.75
  const int qn = s.vgrid.nearest(vec1(0.75));
  point.w[point.index(5, qn, 0)] = 1.0;
  CHECK(action(point, flat) == doctest::Approx(0.5 * 0.75 * 0.75));
}

TEST_CASE("LP assembly shapes and feasibility") {
  Setup s;
  auto lp = assemble_lp(s.spec, s.coupling, s.grid, s.vgrid);
  CHECK(lp.constraints.cols() == 32 * 17 * 2);  // 1088 atoms
  CHECK(lp.n_rows == 32 * 2 + 1);               // test rows plus the mass row
  // objective at the rest atoms over the common zero vanishes
  const int atom0 = (0 * s.vgrid.count() + s.vgrid.zero_node()) * 2;
  CHECK(lp.obj[atom0] == 0.0);
  CHECK(lp.obj[atom0 + 1] == 0.0);

  CHECK_THROWS_AS(assemble_lp(s.spec, s.coupling, s.grid, s.vgrid, 100), BudgetError);

  auto res = solve_mather_lp(lp);
  CHECK(res.value >= -1e-9);
  CHECK(res.value <= 5.0 * s.grid.h);
  // the two-atom rest measure is the unique zero-action holonomic point
  const auto comps = res.minimizer.component_masses();
  CHECK(comps[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(comps[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(holonomy_residual(res.minimizer, s.coupling) <= 1e-10);
  CHECK(res.minimizer.space_marginal()[0] + res.minimizer.space_marginal()[1] ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("LP value tracks the ergodic constant under shifts") {
  Setup s;
  // shift +1: the ergodic constant moves to +1, the minimum action to -1
  HamiltonianSpec shifted = s.spec;
  shifted.shift = 1.0;
  auto lp = assemble_lp(shifted, s.coupling, s.grid, s.vgrid);
  auto res = solve_mather_lp(lp);
  CHECK(res.value == doctest::Approx(-1.0).epsilon(5.0 * s.grid.h));

  ErgodicOptions opts;
  opts.crosscheck_horizon = 0.0;
  auto sol = solve_ergodic(shifted, s.coupling, s.grid, opts);
  CHECK(sol.lambda == doctest::Approx(-res.value).epsilon(0.02));

  // after normalization the value returns to ~0
  auto norm = normalize_spec(shifted, sol.lambda);
  auto lp2 = assemble_lp(norm, s.coupling, s.grid, s.vgrid);
  CHECK(solve_mather_lp(lp2).value == doctest::Approx(0.0).epsilon(5.0 * s.grid.h));
}

TEST_CASE("adjoint-derived measure concentrates on the well") {
  Setup s;
  ErgodicOptions eopts;
  eopts.crosscheck_horizon = 0.0;
  auto sol = solve_ergodic(s.spec, s.coupling, s.grid, eopts);
  CauchyOptions copts;
  copts.theta_field = sol.theta_field;
  copts.store_every = 1;
  const double eps = 0.1;
  auto slab = solve_cauchy_regularized(s.spec, s.coupling, eps, sol.v, copts);
  auto sigma = solve_adjoint(s.spec, s.coupling, eps, slab, 0, 0);
  auto mu = measure_from_adjoint(s.spec, slab, sigma, s.vgrid);

  CHECK(mu.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(action(mu, s.spec)) <= 0.1);
  CHECK(holonomy_residual(mu, s.coupling) <= 0.15);

  // quadratic family: the velocity relabeling is the identity, so every
  // atom's q equals the slab gradient snapped to the lattice; mass sits at
  // q ~ 0 near the well
  double q0_mass = 0.0;
  for (int node = 0; node < s.grid.nodes(); ++node)
    for (int i = 0; i < 2; ++i) q0_mass += mu.w[mu.index(node, s.vgrid.zero_node(), i)];
  CHECK(q0_mass >= 0.8);

  // truncation violations are hard errors naming the needed radius
  auto tiny = make_velocity_grid(1, 5, 0.05);
  CHECK_THROWS_AS(measure_from_adjoint(s.spec, slab, sigma, tiny), std::invalid_argument);
}

TEST_CASE("zero drift sends all adjoint mass to the rest velocity") {
  HamiltonianSpec flat = quadratic_spec("0", 1, 2);
  auto c = CouplingMatrix::from_rows({{0, 1}, {1, 0}});
  auto g = make_grid(1, 16, 2);
  auto vg = make_velocity_grid(1, 9, 1.0);
  CauchyOptions copts;
  copts.store_every = 1;
  auto slab = solve_cauchy_regularized(flat, c, 0.3, GridFunction(g, 1.0), copts);
  auto sigma = solve_adjoint(flat, c, 0.3, slab, 2, 1);
  auto mu = measure_from_adjoint(flat, slab, sigma, vg);
  double q0 = 0.0;
  for (int node = 0; node < g.nodes(); ++node)
    for (int i = 0; i < 2; ++i) q0 += mu.w[mu.index(node, vg.zero_node(), i)];
  CHECK(q0 == doctest::Approx(1.0));
  CHECK(action(mu, flat) == 0.0);
}

TEST_CASE("optimal face sampling and the uniqueness set") {
  // two wells: the optimal face is a segment between the two rest measures
  HamiltonianSpec spec = quadratic_spec("sin(2*pi*x)^2", 1, 2);
  auto c = CouplingMatrix::from_rows({{0, 1}, {1, 0}});
  auto g = make_grid(1, 32, 2);
  auto vg = make_velocity_grid(1, 17, 3.0);
  auto lp = assemble_lp(spec, c, g, vg);
  auto res = solve_mather_lp(lp);
  auto faces = sample_optimal_face(lp, res, 16, 1234);
  CHECK(faces.size() >= 2);

  auto uniq = uniqueness_set(faces, 0.01);
  bool near0 = false, near_half = false;
  for (auto& [node, i] : uniq) {
    const double x = g.coords(node)[0];
    if (std::min(x, 1.0 - x) <= g.h + 1e-12 && i == 0) near0 = true;
    if (std::abs(x - 0.5) <= g.h + 1e-12 && i == 1) near_half = true;
  }
  CHECK(near0);
  CHECK(near_half);

  // single measure: its own thresholded support, dilated one cell
  auto single = uniqueness_set({res.minimizer}, 0.01);
  CHECK(single.size() >= 2);
  CHECK_THROWS_AS(uniqueness_set({}, 0.01), std::invalid_argument);
}
