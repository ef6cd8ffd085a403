#include "core/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wkam {

namespace {

void check_comp(const HamiltonianSpec& spec, int comp) {
  if (comp < 1 || comp > spec.m) throw std::invalid_argument("hamiltonian: unknown component index");
}

void check_finite(const Vec& v, int d, const char* what) {
  if (!all_finite(v, d)) throw std::invalid_argument(std::string("hamiltonian: non-finite ") + what);
}

}  // namespace

Family family_from_name(const std::string& name) {
  if (name == "quadratic") return Family::kQuadratic;
  if (name == "anisotropic") return Family::kAnisotropic;
  if (name == "quartic") return Family::kQuartic;
  throw std::invalid_argument("unknown Hamiltonian family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::kQuadratic: return "quadratic";
    case Family::kAnisotropic: return "anisotropic";
    case Family::kQuartic: return "quartic";
  }
  return "?";
}

Vec SymMat::apply(const Vec& p, int d) const {
  if (d == 1) return vec1(a11 * p[0]);
  return vec2(a11 * p[0] + a12 * p[1], a12 * p[0] + a22 * p[1]);
}

Vec SymMat::solve(const Vec& q, int d) const {
  if (d == 1) return vec1(q[0] / a11);
  const double det = a11 * a22 - a12 * a12;
  return vec2((a22 * q[0] - a12 * q[1]) / det, (-a12 * q[0] + a11 * q[1]) / det);
}

double SymMat::quad(const Vec& p, int d) const { return dot(p, apply(p, d), d); }

double SymMat::min_eig(int d) const {
  if (d == 1) return a11;
  const double tr = a11 + a22;
  const double disc = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
  return 0.5 * (tr - disc);
}

double SymMat::max_abs_entry(int d) const {
  if (d == 1) return std::abs(a11);
  return std::max({std::abs(a11), std::abs(a12), std::abs(a22)});
}

void HamiltonianSpec::validate() const {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("hamiltonian: dimension must be 1 or 2");
  if (m < 1) throw std::invalid_argument("hamiltonian: component count must be positive");
  if (potential.dim() != d || potential.components() != m)
    throw std::invalid_argument("hamiltonian: potential dimensions do not match spec");
  if (!std::isfinite(shift)) throw std::invalid_argument("hamiltonian: non-finite shift");
  if (family == Family::kAnisotropic) {
    if (static_cast<int>(anisotropy.size()) != m)
      throw std::invalid_argument("hamiltonian: anisotropic family needs one matrix per component");
    for (const SymMat& a : anisotropy)
      if (a.min_eig(d) <= 0.0)
        throw std::invalid_argument("hamiltonian: anisotropy matrix is not positive definite");
  }
}

double kinetic(const HamiltonianSpec& spec, const Vec& p, int comp) {
  switch (spec.family) {
    case Family::kQuadratic: return 0.5 * norm_sq(p, spec.d);
    case Family::kAnisotropic: return 0.5 * spec.anisotropy[comp - 1].quad(p, spec.d);
    case Family::kQuartic: {
      const double s = norm_sq(p, spec.d);
      return 0.25 * s * s;
    }
  }
  return 0.0;
}

Vec kinetic_grad(const HamiltonianSpec& spec, const Vec& p, int comp) {
  switch (spec.family) {
    case Family::kQuadratic: return p;
    case Family::kAnisotropic: return spec.anisotropy[comp - 1].apply(p, spec.d);
    case Family::kQuartic: {
      const double s = norm_sq(p, spec.d);
      Vec g{0.0, 0.0};
      for (int k = 0; k < spec.d; ++k) g[k] = s * p[k];
      return g;
    }
  }
  return {0.0, 0.0};
}

double kinetic_dual(const HamiltonianSpec& spec, const Vec& q, int comp) {
  switch (spec.family) {
    case Family::kQuadratic: return 0.5 * norm_sq(q, spec.d);
    case Family::kAnisotropic:
      return 0.5 * dot(q, spec.anisotropy[comp - 1].solve(q, spec.d), spec.d);
    case Family::kQuartic: return 0.75 * std::pow(norm_sq(q, spec.d), 2.0 / 3.0);
  }
  return 0.0;
}

Vec kinetic_dual_grad(const HamiltonianSpec& spec, const Vec& q, int comp) {
  switch (spec.family) {
    case Family::kQuadratic: return q;
    case Family::kAnisotropic: return spec.anisotropy[comp - 1].solve(q, spec.d);
    case Family::kQuartic: {
      const double n2 = norm_sq(q, spec.d);
      Vec g{0.0, 0.0};
      if (n2 == 0.0) return g;
      const double scale = std::pow(n2, -1.0 / 3.0);
      for (int k = 0; k < spec.d; ++k) g[k] = scale * q[k];
      return g;
    }
  }
  return {0.0, 0.0};
}

double eval_hamiltonian(const HamiltonianSpec& spec, const Vec& x, const Vec& p, int comp) {
  check_comp(spec, comp);
  check_finite(x, spec.d, "position");
  check_finite(p, spec.d, "momentum");
  const Vec xr = wrap_unit(x, spec.d);
  return kinetic(spec, p, comp) - spec.potential.value(xr, comp) + spec.shift;
}

double eval_lagrangian(const HamiltonianSpec& spec, const Vec& x, const Vec& q, int comp) {
  check_comp(spec, comp);
  check_finite(x, spec.d, "position");
  check_finite(q, spec.d, "velocity");
  const Vec xr = wrap_unit(x, spec.d);
  return kinetic_dual(spec, q, comp) + spec.potential.value(xr, comp) - spec.shift;
}

HamiltonianDerivatives hamiltonian_derivatives(const HamiltonianSpec& spec, const Vec& x,
                                               const Vec& p, int comp) {
  check_comp(spec, comp);
  check_finite(x, spec.d, "position");
  check_finite(p, spec.d, "momentum");
  const Vec xr = wrap_unit(x, spec.d);
  HamiltonianDerivatives out;
  out.dp = kinetic_grad(spec, p, comp);
  const Vec df = spec.potential.gradient(xr, comp);
  for (int k = 0; k < spec.d; ++k) out.dx[k] = -df[k];
  return out;
}

Vec lagrangian_grad_q(const HamiltonianSpec& spec, const Vec& x, const Vec& q, int comp) {
  check_comp(spec, comp);
  (void)x;  // dual kinetic gradient is x-independent for the built-in families
  return kinetic_dual_grad(spec, q, comp);
}

HamiltonianView make_view(const HamiltonianSpec& spec) {
  HamiltonianView v;
  v.d = spec.d;
  v.m = spec.m;
  v.value = [spec](const Vec& x, const Vec& p, int comp) {
    return eval_hamiltonian(spec, x, p, comp);
  };
  v.grad_p = [spec](const Vec& x, const Vec& p, int comp) {
    return hamiltonian_derivatives(spec, x, p, comp).dp;
  };
  v.grad_x = [spec](const Vec& x, const Vec& p, int comp) {
    return hamiltonian_derivatives(spec, x, p, comp).dx;
  };
  return v;
}

NumericLegendre numeric_legendre(const HamiltonianView& h, const Vec& x, const Vec& q, int comp,
                                 double p_max) {
  if (!(p_max > 0.0)) throw std::invalid_argument("numeric_legendre: p_max must be positive");
  const int d = h.d;
  const int pts = 33;
  Vec center{0.0, 0.0};
  double radius = p_max;
  NumericLegendre best;
  best.value = -std::numeric_limits<double>::infinity();

  for (int level = 0; level < 8; ++level) {
    const double lo0 = center[0] - radius, hi0 = center[0] + radius;
    const double lo1 = center[1] - radius, hi1 = center[1] + radius;
    NumericLegendre local;
    local.value = -std::numeric_limits<double>::infinity();
    const int jmax = (d == 2) ? pts : 1;
    for (int j = 0; j < jmax; ++j) {
      for (int i = 0; i < pts; ++i) {
        Vec p{lo0 + (hi0 - lo0) * i / (pts - 1), 0.0};
        if (d == 2) p[1] = lo1 + (hi1 - lo1) * j / (pts - 1);
        const double val = dot(p, q, d) - h.value(x, p, comp);
        if (val > local.value) {
          local.value = val;
          local.argmax = p;
        }
      }
    }
    best = local;
    center = local.argmax;
    // clamp the refinement window inside the original box
    for (int k = 0; k < d; ++k)
      center[k] = std::min(std::max(center[k], -p_max + radius / (pts - 1)), p_max - radius / (pts - 1));
    radius = 2.5 * radius / (pts - 1);
  }
  for (int k = 0; k < d; ++k)
    if (std::abs(best.argmax[k]) >= p_max * (1.0 - 1e-9)) best.hit_boundary = true;
  return best;
}

GradientBound a_priori_gradient_bound(const HamiltonianSpec& spec) {
  // Sample the potential oscillation, then solve kinetic(R) = osc + 1 for the
  // worst component. Superlinearity makes R finite for every built-in family.
  const int samples = (spec.d == 1) ? 512 : 64;
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  for (int i = 1; i <= spec.m; ++i) {
    const int jmax = (spec.d == 2) ? samples : 1;
    for (int j = 0; j < jmax; ++j) {
      for (int k = 0; k < samples; ++k) {
        Vec x{static_cast<double>(k) / samples, static_cast<double>(j) / samples};
        const double f = spec.potential.value(x, i);
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
      }
    }
  }
  const double osc = fmax - fmin;
  const double target = osc + 1.0;

  GradientBound out;
  switch (spec.family) {
    case Family::kQuadratic:
      out.radius = std::sqrt(2.0 * target);
      out.theta = out.radius;
      break;
    case Family::kAnisotropic: {
      double lmin = std::numeric_limits<double>::infinity(), amax = 0.0;
      for (const SymMat& a : spec.anisotropy) {
        lmin = std::min(lmin, a.min_eig(spec.d));
        amax = std::max(amax, a.max_abs_entry(spec.d));
      }
      out.radius = std::sqrt(2.0 * target / lmin);
      out.theta = spec.d * amax * out.radius;
      break;
    }
    case Family::kQuartic:
      out.radius = std::pow(4.0 * target, 0.25);
      out.theta = out.radius * out.radius * out.radius;
      break;
  }
  return out;
}

}  // namespace wkam
