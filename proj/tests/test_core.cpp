#include <doctest.h>

#include <cmath>
#include <random>

#include "core/assumptions.hpp"
#include "core/coupling.hpp"
#include "core/expression.hpp"
#include "core/hamiltonian.hpp"
#include "grid/grid.hpp"

using namespace wkam;

namespace {

double unit(std::mt19937_64& gen) { return (gen() >> 11) * 0x1.0p-53; }

HamiltonianSpec quadratic_spec(const std::string& f, int d, int m) {
  return HamiltonianSpec{Family::kQuadratic, Potential::from_expression(f, d, m), d, m, 0.0, {}};
}

// independent Legendre oracle: brute-force sup over a momentum lattice
double brute_force_dual(const HamiltonianSpec& spec, const Vec& x, const Vec& q, double p_max,
                        double step) {
  double best = -1e300;
  for (double p = -p_max; p <= p_max + 1e-12; p += step)
    best = std::max(best, p * q[0] - eval_hamiltonian(spec, x, vec1(p), 1));
  return best;
}

}  // namespace

TEST_CASE("expression parser evaluates and differentiates") {
  auto e = Expression::parse("sin(pi*x)^2 + 0.5*cos(2*pi*y) - 1/4");
  CHECK(e.eval(0.5, 0.0, 1) == doctest::Approx(1.0 + 0.5 - 0.25));
  auto dx = e.derivative(0);
  // central-difference cross-check of the symbolic derivative
  const double h = 1e-6;
  for (double x : {0.1, 0.37, 0.9}) {
    const double fd = (e.eval(x + h, 0.2, 1) - e.eval(x - h, 0.2, 1)) / (2 * h);
    CHECK(dx.eval(x, 0.2, 1) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(Expression::parse("i").eval(0, 0, 3) == 3.0);
  CHECK_THROWS_AS(Expression::parse("sin(x"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("x^y"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("bogus(x)"), std::invalid_argument);
}

TEST_CASE("spectral table reproduces a trig polynomial and its gradient") {
  const int n = 32;
  std::vector<double> samples(n);
  auto f = [](double x) { return 1.5 + std::cos(2 * M_PI * x) + 0.25 * std::sin(4 * M_PI * x); };
  for (int k = 0; k < n; ++k) samples[k] = f(static_cast<double>(k) / n);
  auto pot = Potential::from_table(samples, 1, n, 1);
  auto dfdx = [](double x) {
    return -2 * M_PI * std::sin(2 * M_PI * x) + M_PI * std::cos(4 * M_PI * x);
  };
  for (double x : {0.0, 0.123, 0.5, 0.77}) {
    CHECK(pot.value(vec1(x), 1) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(pot.gradient(vec1(x), 1)[0] == doctest::Approx(dfdx(x)).epsilon(1e-10));
  }
  CHECK_THROWS(Potential::from_table({1.0, -0.5, 1.0, 1.0}, 1, 4, 1));  // negative sample
}

TEST_CASE("Hamiltonian family values") {
  auto zero = quadratic_spec("0", 1, 1);
  CHECK(eval_hamiltonian(zero, vec1(0.3), vec1(2.0), 1) == doctest::Approx(2.0));

  auto sinsq = quadratic_spec("sin(pi*x)^2", 1, 1);
  CHECK(eval_hamiltonian(sinsq, vec1(0.0), vec1(0.0), 1) == doctest::Approx(0.0));

  HamiltonianSpec quart{Family::kQuartic, Potential::zero(1, 1), 1, 1, 0.0, {}};
  CHECK(eval_hamiltonian(quart, vec1(0.1), vec1(1.0), 1) == doctest::Approx(0.25));

  CHECK_THROWS_AS(eval_hamiltonian(zero, vec1(0.0), vec1(0.0), 5), std::invalid_argument);
  CHECK_THROWS_AS(eval_hamiltonian(zero, vec1(0.0), vec1(NAN), 1), std::invalid_argument);
}

TEST_CASE("Lagrangian closed forms against the brute-force oracle") {
  auto sinsq = quadratic_spec("sin(pi*x)^2", 1, 1);
  CHECK(eval_lagrangian(sinsq, vec1(0.0), vec1(0.0), 1) == doctest::Approx(0.0));
  // L = |q|^2/2 + f for the quadratic family
  CHECK(eval_lagrangian(sinsq, vec1(0.25), vec1(1.0), 1) ==
        doctest::Approx(0.5 + std::sin(M_PI * 0.25) * std::sin(M_PI * 0.25)));

  auto zero = quadratic_spec("0", 1, 1);
  CHECK(eval_lagrangian(zero, vec1(0.0), vec1(2.0), 1) == doctest::Approx(2.0));

  HamiltonianSpec quart{Family::kQuartic, Potential::zero(1, 1), 1, 1, 0.0, {}};
  // frozen oracle: sup_p { p q - p^4/4 } over p in [-4, 4] step 1e-4
  const double oracle = brute_force_dual(quart, vec1(0.0), vec1(1.0), 4.0, 1e-4);
  CHECK(oracle == doctest::Approx(0.75).epsilon(1e-7));
  CHECK(eval_lagrangian(quart, vec1(0.0), vec1(1.0), 1) == doctest::Approx(0.75));
  // analytic dual (3/4)|q|^{4/3} at another velocity
  CHECK(eval_lagrangian(quart, vec1(0.0), vec1(2.0), 1) ==
        doctest::Approx(0.75 * std::pow(2.0, 4.0 / 3.0)));
}

TEST_CASE("derivatives: analytic vs central differences") {
  auto zero = quadratic_spec("0", 1, 1);
  auto der0 = hamiltonian_derivatives(zero, vec1(0.2), vec1(3.0), 1);
  CHECK(der0.dp[0] == doctest::Approx(3.0));
  CHECK(der0.dx[0] == doctest::Approx(0.0));

  auto sinsq = quadratic_spec("sin(pi*x)^2", 1, 1);
  auto der = hamiltonian_derivatives(sinsq, vec1(0.25), vec1(0.0), 1);
  // oracle: central difference of H in x with h = 1e-6
  const double h = 1e-6;
  const double fd = (eval_hamiltonian(sinsq, vec1(0.25 + h), vec1(0.0), 1) -
                     eval_hamiltonian(sinsq, vec1(0.25 - h), vec1(0.0), 1)) /
                    (2 * h);
  CHECK(der.dx[0] == doctest::Approx(fd).epsilon(1e-7));
  CHECK(der.dx[0] == doctest::Approx(-M_PI));  // -f'(1/4) = -pi sin(pi/2) cos(pi/2) * 2
}

TEST_CASE("Legendre involution on all closed-form families") {
  std::mt19937_64 gen(7);
  std::vector<HamiltonianSpec> specs;
  specs.push_back(quadratic_spec("sin(pi*x)^2", 1, 2));
  specs.push_back(HamiltonianSpec{Family::kQuartic, Potential::zero(1, 1), 1, 1, 0.0, {}});
  specs.push_back(HamiltonianSpec{Family::kAnisotropic,
                                  Potential::from_expression("sin(pi*x)^2", 2, 2), 2, 2, 0.0,
                                  {SymMat{2.0, 0.3, 1.0}, SymMat{1.5, -0.2, 0.7}}});
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 100; ++trial) {
      Vec x{unit(gen), unit(gen)};
      Vec p{4.0 * unit(gen) - 2.0, spec.d == 2 ? 4.0 * unit(gen) - 2.0 : 0.0};
      const int i = 1 + static_cast<int>(gen() % spec.m);
      const Vec q = hamiltonian_derivatives(spec, x, p, i).dp;
      const Vec back = lagrangian_grad_q(spec, x, q, i);
      for (int k = 0; k < spec.d; ++k) CHECK(back[k] == doctest::Approx(p[k]).epsilon(1e-8));
    }
  }
}

TEST_CASE("numeric Legendre fallback and boundary detection") {
  auto sinsq = quadratic_spec("sin(pi*x)^2", 1, 1);
  auto view = make_view(sinsq);
  auto res = numeric_legendre(view, vec1(0.3), vec1(1.2), 1, 6.0);
  CHECK_FALSE(res.hit_boundary);
  CHECK(res.value == doctest::Approx(eval_lagrangian(sinsq, vec1(0.3), vec1(1.2), 1)).epsilon(1e-6));
  // box too small: the maximizer p = q sits outside [-0.5, 0.5]
  auto clipped = numeric_legendre(view, vec1(0.3), vec1(1.2), 1, 0.5);
  CHECK(clipped.hit_boundary);
}

TEST_CASE("coupling operator on single nodes and grid functions") {
  auto c2 = CouplingMatrix::from_rows({{0, 1}, {1, 0}});
  double in2[2] = {3, 1}, out2[2];
  c2.apply_node(in2, out2);
  CHECK(out2[0] == doctest::Approx(2.0));
  CHECK(out2[1] == doctest::Approx(-2.0));

  auto c3 = CouplingMatrix::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  double in3[3] = {1, 2, 3}, out3[3];
  c3.apply_node(in3, out3);
  CHECK(out3[0] == doctest::Approx(-3.0));
  CHECK(out3[1] == doctest::Approx(0.0));
  CHECK(out3[2] == doctest::Approx(3.0));

  // constant-in-component functions are annihilated
  auto g = make_grid(1, 16, 3);
  GridFunction phi(g);
  for (int node = 0; node < g.nodes(); ++node)
    for (int i = 0; i < 3; ++i) phi.at(node, i) = std::sin(2 * M_PI * node * g.h);
  CHECK(apply_coupling(c3, phi).max_abs() == 0.0);

  GridFunction wrong(make_grid(1, 16, 2));
  CHECK_THROWS_AS(apply_coupling(c3, wrong), std::invalid_argument);
  CHECK_THROWS(CouplingMatrix::from_rows({{0, -1}, {-1, 0}}));  // negative rate
}

TEST_CASE("coupling identities: self-adjointness and zero column sum") {
  std::mt19937_64 gen(99);
  auto c = CouplingMatrix::zero(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) c.at(i, j) = c.at(j, i) = 2.0 * unit(gen);
  auto g = make_grid(1, 32, 3);
  for (int trial = 0; trial < 25; ++trial) {
    GridFunction f(g), ge(g);
    for (double& x : f.v) x = 2 * unit(gen) - 1;
    for (double& x : ge.v) x = 2 * unit(gen) - 1;
    auto tf = apply_coupling(c, f);
    auto tg = apply_coupling(c, ge);
    for (int node = 0; node < g.nodes(); ++node) {
      double s1 = 0, s2 = 0, s3 = 0;
      for (int i = 0; i < 3; ++i) {
        s1 += f.at(node, i) * tg.at(node, i);
        s2 += ge.at(node, i) * tf.at(node, i);
        s3 += tf.at(node, i);
      }
      CHECK(std::abs(s1 - s2) <= 1e-12);
      CHECK(std::abs(s3) <= 1e-12);
    }
  }
  // linearity
  GridFunction a(g), b(g);
  for (double& x : a.v) x = 2 * unit(gen) - 1;
  for (double& x : b.v) x = 2 * unit(gen) - 1;
  GridFunction sum(g);
  for (size_t k = 0; k < sum.v.size(); ++k) sum.v[k] = 2.0 * a.v[k] - 3.0 * b.v[k];
  auto t_sum = apply_coupling(c, sum);
  auto ta = apply_coupling(c, a);
  auto tb = apply_coupling(c, b);
  for (size_t k = 0; k < sum.v.size(); ++k)
    CHECK(t_sum.v[k] == doctest::Approx(2.0 * ta.v[k] - 3.0 * tb.v[k]).epsilon(1e-12));
}

TEST_CASE("assumption checker accepts the quadratic instance") {
  auto spec = quadratic_spec("sin(pi*x)^2", 1, 2);
  auto c = CouplingMatrix::from_rows({{0, 1}, {1, 0}});
  auto rep = check_assumptions(make_view(spec), c, 500);
  CHECK(rep.all_pass());
  CHECK(rep.entries[0].margin >= -1e-10);  // convexity eigenvalue
  CHECK(rep.entries[3].margin == 0.0);     // exact symmetry
}

TEST_CASE("assumption checker reports failures") {
  auto spec = quadratic_spec("sin(pi*x)^2", 1, 2);
  auto asym = CouplingMatrix::zero(2);
  asym.at(0, 1) = 1.0;  // c21 stays 0
  auto rep = check_assumptions(make_view(spec), asym, 200);
  CHECK_FALSE(rep.entries[3].pass);
  CHECK(rep.entries[3].margin == doctest::Approx(1.0));

  // concave Hamiltonian H = -|p|^2/2, reachable only through the view
  HamiltonianView concave;
  concave.d = 1;
  concave.m = 1;
  concave.value = [](const Vec&, const Vec& p, int) { return -0.5 * p[0] * p[0]; };
  concave.grad_p = [](const Vec&, const Vec& p, int) { return vec1(-p[0]); };
  concave.grad_x = [](const Vec&, const Vec&, int) { return vec1(0.0); };
  auto rep2 = check_assumptions(concave, CouplingMatrix::zero(1), 200);
  CHECK_FALSE(rep2.entries[0].pass);
  CHECK(rep2.entries[0].margin == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK_FALSE(rep2.entries[1].pass);  // coercivity fails too
  CHECK_THROWS_AS(check_assumptions(concave, CouplingMatrix::zero(1), 50),
                  std::invalid_argument);  // budget below 100
}

TEST_CASE("a-priori gradient bound covers the known Lipschitz constants") {
  auto spec = quadratic_spec("sin(pi*x)^2", 1, 2);
  auto gb = a_priori_gradient_bound(spec);
  CHECK(gb.theta == doctest::Approx(2.0));  // sqrt(2 (osc + 1)) with osc = 1
  CHECK(gb.theta >= std::sqrt(2.0));        // true sup |Dv| of the instance
}
