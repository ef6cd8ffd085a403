#include "core/assumptions.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wkam {

namespace {

// Deterministic uniform in [0,1); avoids std::uniform_real_distribution whose
// stream is implementation-defined.
double next_unit(std::mt19937_64& gen) { return (gen() >> 11) * 0x1.0p-53; }

double min_eig_fd_hessian(const HamiltonianView& h, const Vec& x, const Vec& p, int comp) {
  const double e = 1e-4;
  const double h0 = h.value(x, p, comp);
  if (h.d == 1) {
    Vec pp = p, pm = p;
    pp[0] += e;
    pm[0] -= e;
    return (h.value(x, pp, comp) - 2.0 * h0 + h.value(x, pm, comp)) / (e * e);
  }
  auto at = [&](double dx, double dy) {
    Vec q = p;
    q[0] += dx;
    q[1] += dy;
    return h.value(x, q, comp);
  };
  const double hxx = (at(e, 0) - 2.0 * h0 + at(-e, 0)) / (e * e);
  const double hyy = (at(0, e) - 2.0 * h0 + at(0, -e)) / (e * e);
  const double hxy = (at(e, e) - at(e, -e) - at(-e, e) + at(-e, -e)) / (4.0 * e * e);
  const double tr = hxx + hyy;
  const double disc = std::sqrt((hxx - hyy) * (hxx - hyy) + 4.0 * hxy * hxy);
  return 0.5 * (tr - disc);
}

}  // namespace

AssumptionReport check_assumptions(const HamiltonianView& h, const CouplingMatrix& c,
                                   int sample_budget, double p_max) {
  if (sample_budget < 100)
    throw std::invalid_argument("check_assumptions: sample budget must be at least 100");
  if (p_max <= 0.0) p_max = 8.0;

  AssumptionReport rep;
  rep.sample_budget = sample_budget;
  rep.p_max = p_max;
  std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);

  auto rand_x = [&]() {
    Vec x{next_unit(gen), 0.0};
    if (h.d == 2) x[1] = next_unit(gen);
    return x;
  };
  auto rand_p = [&](double radius) {
    Vec p{(2.0 * next_unit(gen) - 1.0) * radius, 0.0};
    if (h.d == 2) p[1] = (2.0 * next_unit(gen) - 1.0) * radius;
    return p;
  };
  auto rand_comp = [&]() { return 1 + static_cast<int>(gen() % static_cast<uint64_t>(h.m)); };

  // A1: convexity via sampled p-Hessian eigenvalues.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < sample_budget; ++s)
      worst = std::min(worst, min_eig_fd_hessian(h, rand_x(), rand_p(p_max), rand_comp()));
    AssumptionEntry& e = rep.entries[0];
    e.id = "A1";
    e.margin = worst;
    e.pass = worst >= -1e-10;
    e.note = "min sampled p-Hessian eigenvalue";
  }

  // A2: growth of H/|p| and of (1/2d) H^2 + D_x H . p along rays.
  {
    const int n_rays = std::max(8, sample_budget / 16);
    double ratio_at_pmax = std::numeric_limits<double>::infinity();
    double second_at_pmax = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int s = 0; s < n_rays; ++s) {
      const Vec x = rand_x();
      const int comp = rand_comp();
      Vec dir{1.0, 0.0};
      if (h.d == 1) {
        dir[0] = (gen() & 1u) ? 1.0 : -1.0;
      } else {
        const double a = 2.0 * M_PI * next_unit(gen);
        dir = vec2(std::cos(a), std::sin(a));
      }
      auto ray1 = [&](double r) {
        Vec p{dir[0] * r, dir[1] * r};
        return h.value(x, p, comp) / r;
      };
      auto ray2 = [&](double r) {
        Vec p{dir[0] * r, dir[1] * r};
        const double hv = h.value(x, p, comp);
        return hv * hv / (2.0 * h.d) + dot(h.grad_x(x, p, comp), p, h.d);
      };
      if (!(ray1(p_max) > ray1(0.5 * p_max) && ray1(0.5 * p_max) > ray1(0.25 * p_max)))
        monotone = false;
      if (!(ray2(p_max) > ray2(0.5 * p_max))) monotone = false;
      ratio_at_pmax = std::min(ratio_at_pmax, ray1(p_max));
      second_at_pmax = std::min(second_at_pmax, ray2(p_max));
    }
    AssumptionEntry& e = rep.entries[1];
    e.id = "A2";
    e.margin = ratio_at_pmax;
    e.pass = monotone && ratio_at_pmax > 0.0 && second_at_pmax > 0.0;
    e.note = "min H/|p| at |p| = p_max; tail growth of both coercivity expressions";
  }

  // A3: fitted growth constant for |D_x H|.
  {
    double c_est = 0.0;
    for (int s = 0; s < sample_budget; ++s) {
      const Vec x = rand_x();
      const Vec p = rand_p(p_max);
      const int comp = rand_comp();
      const double gx = norm(h.grad_x(x, p, comp), h.d);
      c_est = std::max(c_est, gx / (1.0 + norm_sq(p, h.d)));
    }
    AssumptionEntry& e = rep.entries[2];
    e.id = "A3";
    e.margin = c_est;
    e.pass = std::isfinite(c_est);
    e.note = "fitted constant in |D_x H| <= C (1 + |p|^2)";
  }

  // A4: exact symmetry of the switching rates.
  {
    double asym = 0.0;
    for (int i = 0; i < c.m; ++i)
      for (int j = 0; j < c.m; ++j) asym = std::max(asym, std::abs(c.at(i, j) - c.at(j, i)));
    AssumptionEntry& e = rep.entries[3];
    e.id = "A4";
    e.margin = asym;
    e.pass = asym == 0.0;
    e.note = "max |c_ij - c_ji|";
  }

  return rep;
}

}  // namespace wkam
