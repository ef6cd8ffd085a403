#include "evolve/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

namespace {

// Drift field b(x,i) = D_p H(x, D_central u2(x,i), i) for one frame.
std::vector<Vec> drift_field(const HamiltonianSpec& spec, const GridFunction& u2frame) {
  const PeriodicGrid& g = u2frame.grid;
  std::vector<Vec> b(static_cast<size_t>(g.dofs()));
  for (int node = 0; node < g.nodes(); ++node)
    for (int i = 0; i < g.m; ++i)
      b[static_cast<size_t>(node) * g.m + i] =
          kinetic_grad(spec, central_gradient(u2frame, node, i), i + 1);
  return b;
}

}  // namespace

double AdjointDensity::frame_mass(int j) const {
  const GridFunction& f = frames[static_cast<size_t>(j)];
  double s = 0.0;
  for (double x : f.v) s += x;
  return s * std::pow(grid.h, grid.d);
}

GridFunction linearized_forward_step(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                     double eps, double dt, const GridFunction& u2frame,
                                     const GridFunction& w, bool drop_diffusion) {
  const PeriodicGrid& g = w.grid;
  const std::vector<Vec> b = drift_field(spec, u2frame);
  const double eps4 = drop_diffusion ? 0.0 : eps * eps * eps * eps;
  const double scale = dt / eps;
  const double inv_h = 1.0 / g.h;
  const double inv_h2 = inv_h * inv_h;

  GridFunction out(g);
  for (int node = 0; node < g.nodes(); ++node) {
    const double* wn = &w.v[static_cast<size_t>(node) * g.m];
    for (int i = 0; i < g.m; ++i) {
      const Vec& bi = b[static_cast<size_t>(node) * g.m + i];
      double acc = 0.0;
      for (int k = 0; k < g.d; ++k) {
        const double lo = w.at(g.neighbor(node, k, -1), i);
        const double hi = w.at(g.neighbor(node, k, +1), i);
        const double bp = std::max(bi[k], 0.0);
        const double bm = std::min(bi[k], 0.0);
        acc += bp * (wn[i] - lo) * inv_h + bm * (hi - wn[i]) * inv_h;
        acc -= eps4 * (lo - 2.0 * wn[i] + hi) * inv_h2;
      }
      for (int j = 0; j < g.m; ++j) {
        if (j == i) continue;
        acc += coupling.at(i, j) * (wn[i] - wn[j]);
      }
      out.at(node, i) = wn[i] - scale * acc;
    }
  }
  return out;
}

GridFunction adjoint_backward_step(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                                   double eps, double dt, const GridFunction& u2frame,
                                   const GridFunction& sigma, bool drop_diffusion) {
  const PeriodicGrid& g = sigma.grid;
  const std::vector<Vec> b = drift_field(spec, u2frame);
  const double eps4 = drop_diffusion ? 0.0 : eps * eps * eps * eps;
  const double scale = dt / eps;
  const double inv_h = 1.0 / g.h;
  const double inv_h2 = inv_h * inv_h;

  GridFunction out(g);
  for (int node = 0; node < g.nodes(); ++node) {
    for (int i = 0; i < g.m; ++i) {
      const Vec& bi = b[static_cast<size_t>(node) * g.m + i];
      // transpose of the forward diagonal
      double diag = 0.0;
      for (int k = 0; k < g.d; ++k) {
        diag += (std::max(bi[k], 0.0) - std::min(bi[k], 0.0)) * inv_h + 2.0 * eps4 * inv_h2;
      }
      for (int j = 0; j < g.m; ++j)
        if (j != i) diag += coupling.at(i, j);
      double acc = (1.0 - scale * diag) * sigma.at(node, i);
      // neighbors gather with their own drift coefficients
      for (int k = 0; k < g.d; ++k) {
        const int up = g.neighbor(node, k, +1);
        const int dn = g.neighbor(node, k, -1);
        const double b_up = b[static_cast<size_t>(up) * g.m + i][k];
        const double b_dn = b[static_cast<size_t>(dn) * g.m + i][k];
        acc += scale * (std::max(b_up, 0.0) * inv_h + eps4 * inv_h2) * sigma.at(up, i);
        acc += scale * (-std::min(b_dn, 0.0) * inv_h + eps4 * inv_h2) * sigma.at(dn, i);
      }
      for (int j = 0; j < g.m; ++j) {
        if (j == i) continue;
        acc += scale * coupling.at(j, i) * sigma.at(node, j);
      }
      out.at(node, i) = acc;
    }
  }
  return out;
}

double pairing(const GridFunction& a, const GridFunction& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
  return s * std::pow(a.grid.h, a.grid.d);
}

AdjointDensity solve_adjoint(const HamiltonianSpec& spec, const CouplingMatrix& coupling,
                             double eps, const TimeSlab& u2, int x0_node, int comp,
                             const AdjointOptions& opts) {
  if (u2.stride != 1)
    throw std::invalid_argument("adjoint: u2 must be stored at every step (stride 1)");
  if (u2.eps != eps) throw std::invalid_argument("adjoint: eps differs from the u2 slab");
  const PeriodicGrid& g = u2.grid;
  if (x0_node < 0 || x0_node >= g.nodes())
    throw std::invalid_argument("adjoint: terminal node out of range");
  if (comp < 0 || comp >= g.m)
    throw std::invalid_argument("adjoint: terminal component out of range");

  AdjointDensity out;
  out.grid = g;
  out.eps = eps;
  out.dt = u2.dt;
  out.x0_node = x0_node;
  out.comp = comp;
  const int total = u2.total_steps;
  out.stride = opts.store_every > 0 ? opts.store_every : std::max(1, total / 100);

  GridFunction sigma(g);
  sigma.at(x0_node, comp) = std::pow(1.0 / g.h, g.d);  // grid Dirac of unit mass
  const double hd = std::pow(g.h, g.d);

  std::vector<GridFunction> rev_frames;
  std::vector<int> rev_steps;
  auto store = [&](int step) {
    rev_frames.push_back(sigma);
    rev_steps.push_back(step);
  };
  store(total);

  out.min_before_clip = 0.0;
  for (int n = total - 1; n >= 0; --n) {
    sigma = adjoint_backward_step(spec, coupling, eps, u2.dt, u2.at_step(n), sigma,
                                  opts.drop_diffusion);
    double mass = 0.0, mn = 0.0;
    for (double v : sigma.v) {
      mass += v;
      mn = std::min(mn, v);
    }
    mass *= hd;
    out.min_before_clip = std::min(out.min_before_clip, mn);
    if (mn < -1e-12)
      throw DivergedError("adjoint: negative density beyond tolerance at step " +
                          std::to_string(n));
    if (mn < 0.0) {
      double clipped = 0.0;
      for (double& v : sigma.v)
        if (v < 0.0) {
          clipped -= v;
          v = 0.0;
        }
      out.clip_total += clipped * hd;
      double m2 = 0.0;
      for (double v : sigma.v) m2 += v;
      const double corr = 1.0 / (m2 * hd);
      for (double& v : sigma.v) v *= corr;
      mass = 1.0;
    }
    out.max_mass_drift = std::max(out.max_mass_drift, std::abs(mass - 1.0));
    if (std::abs(mass - 1.0) > 1e-10)
      throw DivergedError("adjoint: mass drift beyond tolerance at step " + std::to_string(n));
    if (n % out.stride == 0 || n == 0) store(n);
  }

  const size_t count = rev_frames.size();
  out.frames.resize(count, GridFunction(g));
  out.steps.resize(count);
  out.times.resize(count);
  for (size_t j = 0; j < count; ++j) {
    out.frames[j] = std::move(rev_frames[count - 1 - j]);
    out.steps[j] = rev_steps[count - 1 - j];
    out.times[j] = out.steps[j] * u2.dt;
  }
  return out;
}

double convexity_defect(const HamiltonianView& h, const CouplingMatrix& coupling,
                        const TimeSlab& u1, const TimeSlab& u2, double eps) {
  if (!u1.grid.same_layout(u2.grid) || u1.frames.size() != u2.frames.size())
    throw std::invalid_argument("convexity_defect: slabs do not line up");
  const PeriodicGrid& g = u1.grid;
  const double eps4 = eps * eps * eps * eps;

  GridFunction diff(g), lap(g);
  double defect = -std::numeric_limits<double>::infinity();
  for (size_t fr = 0; fr + 1 < u1.frames.size(); ++fr) {
    const double dtf = u1.times[fr + 1] - u1.times[fr];
    const GridFunction& a = u1.frames[fr];
    const GridFunction& b = u2.frames[fr];
    for (size_t k = 0; k < diff.v.size(); ++k) diff.v[k] = a.v[k] - b.v[k];
    lap = discrete_laplacian(diff);
    for (int node = 0; node < g.nodes(); ++node) {
      const Vec x = g.coords(node);
      for (int i = 0; i < g.m; ++i) {
        const double ddt = ((u1.frames[fr + 1].at(node, i) - u2.frames[fr + 1].at(node, i)) -
                            diff.at(node, i)) /
                           dtf;
        const Vec drift = h.grad_p(x, central_gradient(b, node, i), i + 1);
        double term = eps * ddt + dot(drift, central_gradient(diff, node, i), g.d) -
                      eps4 * lap.at(node, i);
        for (int j = 0; j < g.m; ++j) {
          if (j == i) continue;
          term += coupling.at(i, j) * (diff.at(node, i) - diff.at(node, j));
        }
        defect = std::max(defect, term);
      }
    }
  }
  return defect;
}

}  // namespace wkam
