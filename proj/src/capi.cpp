#include "wkam/wkam.h"

#include <cstring>
#include <string>

#include "core/assumptions.hpp"
#include "core/errors.hpp"
#include "evolve/adjoint.hpp"
#include "grid/mollify.hpp"
#include "io/writers.hpp"
#include "mather/adjoint_measure.hpp"
#include "mather/lp.hpp"
#include "pipeline/pipeline.hpp"
#include "verify/comparison.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& what) { g_last_error = what; }

// Translate exceptions into status codes at the boundary.
template <typename Fn>
wkam_status guarded(Fn&& fn) {
  try {
    fn();
    return WKAM_OK;
  } catch (const wkam::ParseError& e) {
    set_error(e.what());
    return WKAM_ERR_PARSE;
  } catch (const wkam::IoError& e) {
    set_error(e.what());
    return WKAM_ERR_IO;
  } catch (const wkam::DivergedError& e) {
    set_error(e.what());
    return WKAM_ERR_DIVERGED;
  } catch (const wkam::InfeasibleError& e) {
    set_error(e.what());
    return WKAM_ERR_INFEASIBLE;
  } catch (const wkam::BudgetError& e) {
    set_error(e.what());
    return WKAM_ERR_BUDGET;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return WKAM_ERR_ARG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return WKAM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wkam::Vec to_vec(const double* p, int d) {
  wkam::Vec v{0.0, 0.0};
  for (int k = 0; k < d; ++k) v[k] = p[k];
  return v;
}

}  // namespace

struct wkam_problem {
  wkam::RunConfig cfg;
  std::string config_text;
};

struct wkam_ergodic {
  wkam::SolvedProblem prob;
};

struct wkam_slab {
  wkam::TimeSlab slab;
  wkam::HamiltonianSpec spec;      // the (possibly normalized) spec it solves
  wkam::CouplingMatrix coupling;
};

struct wkam_density {
  wkam::AdjointDensity sigma;
};

struct wkam_measure {
  wkam::DiscreteMeasure mu;
};

extern "C" {

const char* wkam_status_name(int status) {
  switch (status) {
    case WKAM_OK: return "ok";
    case WKAM_ERR_ARG: return "invalid argument";
    case WKAM_ERR_PARSE: return "parse error";
    case WKAM_ERR_IO: return "io error";
    case WKAM_ERR_DIVERGED: return "solver diverged";
    case WKAM_ERR_INFEASIBLE: return "infeasible";
    case WKAM_ERR_BUDGET: return "resource budget exceeded";
    case WKAM_ERR_VERIFY: return "verification failed";
    case WKAM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wkam_last_error(void) { return g_last_error.c_str(); }

void wkam_string_free(char* s) { delete[] s; }

wkam_status wkam_problem_from_config(const char* text, wkam_problem** out) {
  if (!text || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    auto* p = new wkam_problem{wkam::RunConfig::from_text(text), text};
    p->cfg.build_spec();  // fail fast on inconsistent problem blocks
    *out = p;
  });
}

wkam_status wkam_problem_from_file(const char* path, wkam_problem** out) {
  if (!path || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const std::string text = wkam::read_text_file(path);
    auto* p = new wkam_problem{wkam::RunConfig::from_text(text), text};
    p->cfg.build_spec();
    *out = p;
  });
}

wkam_status wkam_problem_override(wkam_problem* p, const char* key, const char* value) {
  if (!p || !key || !value) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { p->cfg.apply_override(key, value); });
}

void wkam_problem_free(wkam_problem* p) { delete p; }

wkam_status wkam_problem_dims(const wkam_problem* p, int* d, int* n, int* m) {
  if (!p) {
    set_error("null problem");
    return WKAM_ERR_ARG;
  }
  if (d) *d = p->cfg.d;
  if (n) *n = p->cfg.n;
  if (m) *m = p->cfg.m;
  return WKAM_OK;
}

wkam_status wkam_eval_hamiltonian(const wkam_problem* p, const double* x, const double* momentum,
                                  int component, double* out) {
  if (!p || !x || !momentum || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const auto spec = p->cfg.build_spec();
    *out = wkam::eval_hamiltonian(spec, to_vec(x, spec.d), to_vec(momentum, spec.d), component);
  });
}

wkam_status wkam_eval_lagrangian(const wkam_problem* p, const double* x, const double* velocity,
                                 int component, double* out) {
  if (!p || !x || !velocity || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const auto spec = p->cfg.build_spec();
    *out = wkam::eval_lagrangian(spec, to_vec(x, spec.d), to_vec(velocity, spec.d), component);
  });
}

wkam_status wkam_eval_gradients(const wkam_problem* p, const double* x, const double* momentum,
                                int component, double* dp_out, double* dx_out) {
  if (!p || !x || !momentum) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const auto spec = p->cfg.build_spec();
    const auto der =
        wkam::hamiltonian_derivatives(spec, to_vec(x, spec.d), to_vec(momentum, spec.d), component);
    for (int k = 0; k < spec.d; ++k) {
      if (dp_out) dp_out[k] = der.dp[k];
      if (dx_out) dx_out[k] = der.dx[k];
    }
  });
}

wkam_status wkam_check_assumptions(const wkam_problem* p, int sample_budget, char** json_out) {
  if (!p || !json_out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const auto spec = p->cfg.build_spec();
    const auto coupling = p->cfg.build_coupling();
    const auto gb = wkam::a_priori_gradient_bound(spec);
    const auto rep =
        wkam::check_assumptions(wkam::make_view(spec), coupling, sample_budget, 2.0 * gb.radius);
    *json_out = dup_string(wkam::assumptions_json(rep).dump(2));
  });
}

wkam_status wkam_solve_ergodic(const wkam_problem* p, wkam_ergodic** out) {
  if (!p || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { *out = new wkam_ergodic{wkam::solve_problem(p->cfg)}; });
}

void wkam_ergodic_free(wkam_ergodic* e) { delete e; }

wkam_status wkam_ergodic_lambda(const wkam_ergodic* e, double* out) {
  if (!e || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  *out = e->prob.lambda_raw;
  return WKAM_OK;
}

wkam_status wkam_ergodic_residual(const wkam_ergodic* e, double* out) {
  if (!e || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  *out = e->prob.ergodic.residual;
  return WKAM_OK;
}

wkam_status wkam_ergodic_values(const wkam_ergodic* e, double* buf, size_t len) {
  if (!e || !buf) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  const auto& v = e->prob.ergodic.v.v;
  if (len != v.size()) {
    set_error("buffer length must be n^d * m");
    return WKAM_ERR_ARG;
  }
  std::memcpy(buf, v.data(), v.size() * sizeof(double));
  return WKAM_OK;
}

wkam_status wkam_problem_normalize(wkam_problem* p, double lambda) {
  if (!p) {
    set_error("null problem");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    if (!std::isfinite(lambda)) throw std::invalid_argument("normalize: non-finite lambda");
    p->cfg.shift -= lambda;
  });
}

wkam_status wkam_solve_cauchy(const wkam_problem* p, double eps, const wkam_ergodic* init,
                              int store_every, wkam_slab** out) {
  if (!p || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    wkam::SolvedProblem prob = init ? init->prob : wkam::solve_problem(p->cfg);
    auto opts = wkam::cauchy_options(p->cfg, prob.ergodic, store_every == 1);
    if (store_every > 1) opts.store_every = store_every;
    const wkam::GridFunction v0 = wkam::mollify(prob.ergodic.v, eps * eps * eps * eps);
    auto* s = new wkam_slab{
        wkam::solve_cauchy_regularized(prob.spec, prob.coupling, eps, v0, opts), prob.spec,
        prob.coupling};
    *out = s;
  });
}

void wkam_slab_free(wkam_slab* s) { delete s; }

wkam_status wkam_slab_info(const wkam_slab* s, int* frames, int* total_steps, double* dt) {
  if (!s) {
    set_error("null slab");
    return WKAM_ERR_ARG;
  }
  if (frames) *frames = static_cast<int>(s->slab.frames.size());
  if (total_steps) *total_steps = s->slab.total_steps;
  if (dt) *dt = s->slab.dt;
  return WKAM_OK;
}

wkam_status wkam_slab_frame(const wkam_slab* s, int frame, double* t_out, double* buf,
                            size_t len) {
  if (!s || !buf) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  if (frame < 0 || frame >= static_cast<int>(s->slab.frames.size())) {
    set_error("frame index out of range");
    return WKAM_ERR_ARG;
  }
  const auto& f = s->slab.frames[static_cast<size_t>(frame)].v;
  if (len != f.size()) {
    set_error("buffer length must be n^d * m");
    return WKAM_ERR_ARG;
  }
  if (t_out) *t_out = s->slab.times[static_cast<size_t>(frame)];
  std::memcpy(buf, f.data(), f.size() * sizeof(double));
  return WKAM_OK;
}

wkam_status wkam_slab_write_csv(const wkam_slab* s, const char* path) {
  if (!s || !path) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { wkam::write_text_file(path, wkam::slab_csv(s->slab)); });
}

wkam_status wkam_slab_write_binary(const wkam_slab* s, const char* path) {
  if (!s || !path) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { wkam::write_binary_file(path, wkam::slab_binary(s->slab)); });
}

wkam_status wkam_solve_adjoint(const wkam_problem* p, const wkam_slab* u2, int x0_node,
                               int component, wkam_density** out) {
  if (!p || !u2 || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    *out = new wkam_density{wkam::solve_adjoint(u2->spec, u2->coupling, u2->slab.eps, u2->slab,
                                                x0_node, component - 1)};
  });
}

void wkam_density_free(wkam_density* s) { delete s; }

wkam_status wkam_density_info(const wkam_density* s, int* frames, double* min_before_clip,
                              double* max_mass_drift) {
  if (!s) {
    set_error("null density");
    return WKAM_ERR_ARG;
  }
  if (frames) *frames = static_cast<int>(s->sigma.frames.size());
  if (min_before_clip) *min_before_clip = s->sigma.min_before_clip;
  if (max_mass_drift) *max_mass_drift = s->sigma.max_mass_drift;
  return WKAM_OK;
}

wkam_status wkam_density_frame(const wkam_density* s, int frame, double* t_out, double* buf,
                               size_t len) {
  if (!s || !buf) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  if (frame < 0 || frame >= static_cast<int>(s->sigma.frames.size())) {
    set_error("frame index out of range");
    return WKAM_ERR_ARG;
  }
  const auto& f = s->sigma.frames[static_cast<size_t>(frame)].v;
  if (len != f.size()) {
    set_error("buffer length must be n^d * m");
    return WKAM_ERR_ARG;
  }
  if (t_out) *t_out = s->sigma.times[static_cast<size_t>(frame)];
  std::memcpy(buf, f.data(), f.size() * sizeof(double));
  return WKAM_OK;
}

wkam_status wkam_solve_mather_lp(const wkam_problem* p, wkam_measure** out, double* value) {
  if (!p || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const wkam::SolvedProblem prob = wkam::solve_problem(p->cfg);
    const auto vgrid = wkam::velocity_grid_for(p->cfg, prob.spec, prob.ergodic);
    const auto lp =
        wkam::assemble_lp(prob.spec, prob.coupling, prob.grid, vgrid, p->cfg.atom_budget);
    auto res = wkam::solve_mather_lp(lp, p->cfg.lp_max_iter);
    if (value) *value = res.value;
    *out = new wkam_measure{std::move(res.minimizer)};
  });
}

wkam_status wkam_measure_from_adjoint(const wkam_problem* p, const wkam_slab* u2,
                                      const wkam_density* sigma, wkam_measure** out) {
  if (!p || !u2 || !sigma || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    wkam::VelocityGrid vgrid;
    if (p->cfg.qmax > 0.0) {
      vgrid = wkam::make_velocity_grid(p->cfg.d, p->cfg.nq, p->cfg.qmax);
    } else {
      // auto truncation needs the stationary slope bound
      const wkam::SolvedProblem prob = wkam::solve_problem(p->cfg);
      vgrid = wkam::velocity_grid_for(p->cfg, u2->spec, prob.ergodic);
    }
    *out = new wkam_measure{wkam::measure_from_adjoint(u2->spec, u2->slab, sigma->sigma, vgrid)};
  });
}

wkam_status wkam_example_measure(const wkam_problem* p, int x0_node, wkam_measure** out) {
  if (!p || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    const auto spec = p->cfg.build_spec();
    const auto grid = p->cfg.build_grid();
    const double qmax = p->cfg.qmax > 0.0 ? p->cfg.qmax : 1.0;
    const auto vgrid = wkam::make_velocity_grid(p->cfg.d, p->cfg.nq, qmax);
    *out = new wkam_measure{wkam::example_measure(grid, vgrid, x0_node, &spec.potential)};
  });
}

void wkam_measure_free(wkam_measure* mu) { delete mu; }

wkam_status wkam_measure_action(const wkam_problem* p, const wkam_measure* mu, double* out) {
  if (!p || !mu || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { *out = wkam::action(mu->mu, p->cfg.build_spec()); });
}

wkam_status wkam_measure_holonomy_residual(const wkam_problem* p, const wkam_measure* mu,
                                           double* out) {
  if (!p || !mu || !out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { *out = wkam::holonomy_residual(mu->mu, p->cfg.build_coupling()); });
}

wkam_status wkam_measure_write_csv(const wkam_measure* mu, const char* path) {
  if (!mu || !path) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] { wkam::write_text_file(path, wkam::measure_csv(mu->mu)); });
}

wkam_status wkam_measure_summary_json(const wkam_problem* p, const wkam_measure* mu,
                                      char** json_out) {
  if (!p || !mu || !json_out) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  return guarded([&] {
    *json_out = dup_string(
        wkam::measure_summary_json(mu->mu, p->cfg.build_spec(), p->cfg.build_coupling())
            .dump(2));
  });
}

wkam_status wkam_run(const char* subcommand, const char* config_path,
                     const char* const* overrides, int n_overrides, char** summary_json,
                     int* exit_code) {
  if (!subcommand || (n_overrides > 0 && !overrides)) {
    set_error("null argument");
    return WKAM_ERR_ARG;
  }
  int local_exit = 0;
  const wkam_status rc = guarded([&] {
    std::string text;
    wkam::RunConfig cfg;
    if (config_path) {
      text = wkam::read_text_file(config_path);
      cfg = wkam::RunConfig::from_text(text);
    }
    for (int i = 0; i < n_overrides; ++i) {
      const std::string kv = overrides[i];
      const size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw wkam::ParseError("override '" + kv + "' is not key=value");
      cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const wkam::RunResult res = wkam::run_command(subcommand, cfg, text);
    if (summary_json) *summary_json = dup_string(res.summary.dump(2));
    local_exit = res.exit_code;
  });
  if (rc != WKAM_OK) {
    // configuration-class failures exit 2, solver-class failures exit 1
    const bool config_class = rc == WKAM_ERR_PARSE || rc == WKAM_ERR_IO || rc == WKAM_ERR_ARG;
    if (exit_code) *exit_code = config_class ? 2 : 1;
    return rc;
  }
  if (exit_code) *exit_code = local_exit;
  if (local_exit != 0) {
    set_error("verification gate failed in '" + std::string(subcommand) + "'");
    return WKAM_ERR_VERIFY;
  }
  return WKAM_OK;
}

}  // extern "C"
