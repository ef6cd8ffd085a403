#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/potential.hpp"
#include "core/vec.hpp"

namespace wkam {

// Built-in convex superlinear families. Kinetic parts are x-independent and
// come with closed-form Legendre duals.
enum class Family {
  kQuadratic,    // H = |p|^2/2 - f(x,i)
  kAnisotropic,  // H = p.A(i)p/2 - f(x,i), A(i) SPD
  kQuartic,      // H = |p|^4/4 - f(x,i)
};

Family family_from_name(const std::string& name);
std::string family_name(Family f);

// Symmetric matrix for d <= 2; d = 1 uses a11 only.
struct SymMat {
  double a11 = 1.0, a12 = 0.0, a22 = 1.0;

  Vec apply(const Vec& p, int d) const;
  Vec solve(const Vec& q, int d) const;  // A^{-1} q
  double quad(const Vec& p, int d) const;
  double min_eig(int d) const;
  double max_abs_entry(int d) const;
};

struct HamiltonianSpec {
  Family family = Family::kQuadratic;
  Potential potential;
  int d = 1;
  int m = 1;
  double shift = 0.0;            // added to H; normalization moves the ergodic constant
  std::vector<SymMat> anisotropy;  // size m for kAnisotropic, else empty

  void validate() const;  // throws on inconsistent fields
};

// x-independent kinetic part and its gradient.
double kinetic(const HamiltonianSpec& spec, const Vec& p, int comp);
Vec kinetic_grad(const HamiltonianSpec& spec, const Vec& p, int comp);
// Legendre dual of the kinetic part and its q-gradient.
double kinetic_dual(const HamiltonianSpec& spec, const Vec& q, int comp);
Vec kinetic_dual_grad(const HamiltonianSpec& spec, const Vec& q, int comp);

double eval_hamiltonian(const HamiltonianSpec& spec, const Vec& x, const Vec& p, int comp);
double eval_lagrangian(const HamiltonianSpec& spec, const Vec& x, const Vec& q, int comp);

struct HamiltonianDerivatives {
  Vec dp;  // D_p H
  Vec dx;  // D_x H
};
HamiltonianDerivatives hamiltonian_derivatives(const HamiltonianSpec& spec, const Vec& x,
                                               const Vec& p, int comp);

Vec lagrangian_grad_q(const HamiltonianSpec& spec, const Vec& x, const Vec& q, int comp);

// Generic callable view; checkers and defect evaluators accept this so tests
// can inject Hamiltonians outside the built-in families.
struct HamiltonianView {
  int d = 1;
  int m = 1;
  std::function<double(const Vec& x, const Vec& p, int comp)> value;
  std::function<Vec(const Vec& x, const Vec& p, int comp)> grad_p;
  std::function<Vec(const Vec& x, const Vec& p, int comp)> grad_x;
};

HamiltonianView make_view(const HamiltonianSpec& spec);

// Fallback Legendre transform sup_p { p.q - H(x,p,i) } over the box
// [-p_max, p_max]^d with local refinement.
struct NumericLegendre {
  double value = 0.0;
  Vec argmax{0.0, 0.0};
  bool hit_boundary = false;  // p_max too small; value untrustworthy
};
NumericLegendre numeric_legendre(const HamiltonianView& h, const Vec& x, const Vec& q, int comp,
                                 double p_max);

// A-priori gradient scale: radius R with H(x,p,i) > max_x H(x,0,i) for
// |p| >= R, and the dissipation bound theta = sup_{|p|<=R} |D_p H|_inf.
struct GradientBound {
  double radius = 1.0;
  double theta = 1.0;
};
GradientBound a_priori_gradient_bound(const HamiltonianSpec& spec);

}  // namespace wkam
