#include "pipeline/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "core/assumptions.hpp"
#include "core/errors.hpp"
#include "evolve/adjoint.hpp"
#include "grid/mollify.hpp"
#include "io/sha1.hpp"
#include "io/writers.hpp"
#include "mather/adjoint_measure.hpp"
#include "pipeline/acceptance.hpp"
#include "util/parallel.hpp"
#include "verify/eikonal.hpp"

namespace wkam {

ErgodicOptions ergodic_options(const RunConfig& cfg) {
  ErgodicOptions opts;
  opts.tol = cfg.tol;
  opts.polish_tol = cfg.polish_tol;
  opts.max_sweeps = cfg.max_sweeps;
  opts.dissipation = cfg.dissipation == "global" ? Dissipation::kGlobal : Dissipation::kLocal;
  opts.crosscheck_horizon = cfg.crosscheck_horizon;
  return opts;
}

CauchyOptions cauchy_options(const RunConfig& cfg, const ErgodicSolution& sol, bool dense) {
  CauchyOptions opts;
  opts.cfl_safety = cfg.cfl_safety;
  opts.store_every = dense ? 1 : cfg.store_every;
  opts.theta_field = sol.theta_field;
  return opts;
}

SolvedProblem solve_problem(const RunConfig& cfg) {
  SolvedProblem out;
  out.spec = cfg.build_spec();
  out.coupling = cfg.build_coupling();
  out.grid = cfg.build_grid();
  const ErgodicOptions opts = ergodic_options(cfg);
  out.ergodic = solve_ergodic(out.spec, out.coupling, out.grid, opts);
  out.lambda_raw = out.ergodic.lambda;
  if (std::abs(out.lambda_raw) > cfg.normalize_tol) {
    out.spec = normalize_spec(out.spec, out.lambda_raw);
    out.ergodic = solve_ergodic(out.spec, out.coupling, out.grid, opts);
    out.normalized = true;
  }
  return out;
}

VelocityGrid velocity_grid_for(const RunConfig& cfg, const HamiltonianSpec& spec,
                               const ErgodicSolution& sol) {
  double qmax = cfg.qmax;
  if (!(qmax > 0.0)) {
    // support bound: |D_p H| over momenta up to the measured slope plus one
    const double p_reach = lipschitz_constant(sol.v) + 1.0;
    qmax = 0.0;
    for (int i = 1; i <= spec.m; ++i) {
      qmax = std::max(qmax, max_abs(kinetic_grad(spec, vec1(p_reach), i), spec.d));
      if (spec.d == 2) {
        const double diag = p_reach / std::sqrt(2.0);
        qmax = std::max(qmax, max_abs(kinetic_grad(spec, vec2(diag, diag), i), spec.d));
      }
    }
  }
  return make_velocity_grid(cfg.d, cfg.nq, qmax);
}

namespace {

using nlohmann::json;

class ArtifactSink {
 public:
  ArtifactSink(const RunConfig& cfg, std::string command, std::string config_text)
      : cfg_(cfg), command_(std::move(command)), config_text_(std::move(config_text)) {
    ensure_directory(cfg.out_dir);
    start_ = std::chrono::steady_clock::now();
  }

  std::string path(const std::string& name) const { return cfg_.out_dir + "/" + name; }

  void text(const std::string& name, const std::string& content) {
    write_text_file(path(name), content);
    files_.push_back(name);
  }
  void binary(const std::string& name, const std::vector<char>& bytes) {
    write_binary_file(path(name), bytes);
    files_.push_back(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  json& constants() { return constants_; }

  void finish(RunResult& result) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest;
    manifest["command"] = command_;
    manifest["config_sha1"] = config_text_.empty() ? "builtin" : sha1_hex(config_text_);
    manifest["config"] = config_echo();
    manifest["constants"] = constants_;
    manifest["artifacts"] = files_;
    manifest["wall_time_s"] = wall;
    write_text_file(path("manifest.json"), manifest.dump(2) + "\n");
    files_.push_back("manifest.json");
    result.artifacts = files_;
  }

 private:
  json config_echo() const {
    json j;
    j["problem"] = {{"family", cfg_.family},
                    {"potential", cfg_.potential},
                    {"potential_table", cfg_.potential_table},
                    {"d", cfg_.d},
                    {"m", cfg_.m},
                    {"shift", cfg_.shift},
                    {"coupling", cfg_.coupling}};
    j["discretization"] = {{"N", cfg_.n},        {"Nq", cfg_.nq},
                           {"Qmax", cfg_.qmax},  {"eps", cfg_.eps},
                           {"cfl_safety", cfg_.cfl_safety}, {"store_every", cfg_.store_every}};
    j["solver"] = {{"tol", cfg_.tol},
                   {"polish_tol", cfg_.polish_tol},
                   {"max_sweeps", cfg_.max_sweeps},
                   {"lp_max_iter", cfg_.lp_max_iter},
                   {"atom_budget", cfg_.atom_budget},
                   {"seed", cfg_.seed},
                   {"dissipation", cfg_.dissipation},
                   {"normalize_tol", cfg_.normalize_tol},
                   {"face_samples", cfg_.face_samples},
                   {"mass_threshold", cfg_.mass_threshold},
                   {"crosscheck_horizon", cfg_.crosscheck_horizon},
                   {"sample_budget", cfg_.sample_budget},
                   {"adjoint_x0", cfg_.adjoint_x0},
                   {"adjoint_component", cfg_.adjoint_component}};
    j["compare"] = {{"anchors1", cfg_.anchors1},
                    {"anchors2", cfg_.anchors2},
                    {"shift1", cfg_.compare_shift1},
                    {"shift2", cfg_.compare_shift2},
                    {"tol_hyp", cfg_.tol_hyp}};
    j["output"] = {{"dir", cfg_.out_dir}, {"formats", cfg_.formats}};
    return j;
  }

  const RunConfig& cfg_;
  std::string command_;
  std::string config_text_;
  std::vector<std::string> files_;
  json constants_;
  std::chrono::steady_clock::time_point start_;
};

std::string eps_tag(double eps) {
  std::string s = fmt_double(eps);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

RunResult cmd_check(const RunConfig& cfg, ArtifactSink& sink) {
  const HamiltonianSpec spec = cfg.build_spec();
  const CouplingMatrix coupling = cfg.build_coupling();
  const GradientBound gb = a_priori_gradient_bound(spec);
  const AssumptionReport rep =
      check_assumptions(make_view(spec), coupling, cfg.sample_budget, 2.0 * gb.radius);
  RunResult out;
  out.summary = assumptions_json(rep);
  sink.constants()["p_max"] = rep.p_max;
  sink.json_file("assumptions.json", out.summary);
  out.exit_code = rep.all_pass() ? 0 : 1;
  return out;
}

RunResult cmd_ergodic(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  RunResult out;
  json j = ergodic_json(prob.ergodic);
  j["lambda_raw"] = prob.lambda_raw;
  j["normalized"] = prob.normalized;
  out.summary = j;
  sink.constants()["theta"] = prob.ergodic.theta;
  sink.json_file("ergodic.json", j);
  if (cfg.wants_format("csv")) sink.text("v.csv", grid_function_csv(prob.ergodic.v));
  return out;
}

RunResult cmd_cauchy(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  RunResult out;
  const int n_eps = static_cast<int>(cfg.eps.size());
  std::vector<TimeSlab> slabs(static_cast<size_t>(n_eps));
  std::vector<char> fallbacks(static_cast<size_t>(n_eps), 0);
  // ladder entries are independent solves; WKAM_THREADS caps the workers
  run_tasks(n_eps, [&](int i) {
    const double eps = cfg.eps[static_cast<size_t>(i)];
    bool fell_back = false;
    const GridFunction v0 = mollify(prob.ergodic.v, eps * eps * eps * eps, &fell_back);
    fallbacks[static_cast<size_t>(i)] = fell_back ? 1 : 0;
    slabs[static_cast<size_t>(i)] = solve_cauchy_regularized(
        prob.spec, prob.coupling, eps, v0, cauchy_options(cfg, prob.ergodic, false));
  });

  json sweeps = json::array();
  for (int i = 0; i < n_eps; ++i) {
    const double eps = cfg.eps[static_cast<size_t>(i)];
    const TimeSlab& slab = slabs[static_cast<size_t>(i)];
    double lip = 0.0, max_theta_u = 0.0, max_eps_ut = 0.0;
    for (size_t j = 0; j < slab.frames.size(); ++j) {
      lip = std::max(lip, lipschitz_constant(slab.frames[j]));
      max_theta_u = std::max(max_theta_u, apply_coupling(prob.coupling, slab.frames[j]).max_abs());
      if (j + 1 < slab.frames.size()) {
        const double dtf = slab.times[j + 1] - slab.times[j];
        for (size_t k = 0; k < slab.frames[j].v.size(); ++k)
          max_eps_ut = std::max(max_eps_ut, eps * std::abs(slab.frames[j + 1].v[k] -
                                                           slab.frames[j].v[k]) /
                                                dtf);
      }
    }
    json entry{{"eps", eps},
               {"dt", slab.dt},
               {"steps", slab.total_steps},
               {"stride", slab.stride},
               {"mollify_identity_fallback", fallbacks[static_cast<size_t>(i)] != 0},
               {"distance_to_v", slab_distance(slab, prob.ergodic.v)},
               {"lipschitz", lip},
               {"max_coupling", max_theta_u},
               {"max_eps_dt", max_eps_ut}};
    const std::string tag = eps_tag(eps);
    if (cfg.wants_format("csv")) sink.text("u_eps" + tag + ".csv", slab_csv(slab));
    if (cfg.wants_format("bin")) sink.binary("u_eps" + tag + ".bin", slab_binary(slab));
    sweeps.push_back(entry);
  }
  json j{{"lambda", prob.ergodic.lambda}, {"normalized", prob.normalized}, {"sweeps", sweeps}};
  out.summary = j;
  sink.constants()["theta"] = prob.ergodic.theta;
  json dts = json::array();
  for (const TimeSlab& s : slabs) dts.push_back(s.dt);
  sink.constants()["dt"] = dts;
  sink.json_file("cauchy.json", j);
  return out;
}

RunResult cmd_adjoint(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  Vec x0{0.0, 0.0};
  for (int k = 0; k < cfg.d && k < static_cast<int>(cfg.adjoint_x0.size()); ++k)
    x0[k] = cfg.adjoint_x0[k];
  const int x0_node = prob.grid.nearest_node(x0);
  RunResult out;
  const int n_eps = static_cast<int>(cfg.eps.size());
  std::vector<AdjointDensity> densities(static_cast<size_t>(n_eps));
  run_tasks(n_eps, [&](int i) {
    const double eps = cfg.eps[static_cast<size_t>(i)];
    const GridFunction v0 = mollify(prob.ergodic.v, eps * eps * eps * eps);
    const TimeSlab slab = solve_cauchy_regularized(prob.spec, prob.coupling, eps, v0,
                                                   cauchy_options(cfg, prob.ergodic, true));
    AdjointOptions aopts;
    aopts.store_every = cfg.store_every;
    densities[static_cast<size_t>(i)] = solve_adjoint(prob.spec, prob.coupling, eps, slab,
                                                      x0_node, cfg.adjoint_component - 1, aopts);
  });
  json sweeps = json::array();
  for (int i = 0; i < n_eps; ++i) {
    const double eps = cfg.eps[static_cast<size_t>(i)];
    const AdjointDensity& sigma = densities[static_cast<size_t>(i)];
    double min_mass = 2.0, max_mass = 0.0;
    for (size_t j = 0; j < sigma.frames.size(); ++j) {
      const double m = sigma.frame_mass(static_cast<int>(j));
      min_mass = std::min(min_mass, m);
      max_mass = std::max(max_mass, m);
    }
    json entry{{"eps", eps},
               {"x0_node", x0_node},
               {"component", cfg.adjoint_component},
               {"dt", sigma.dt},
               {"frames", sigma.frames.size()},
               {"min_before_clip", sigma.min_before_clip},
               {"clip_total", sigma.clip_total},
               {"max_mass_drift", sigma.max_mass_drift},
               {"frame_mass_range", {min_mass, max_mass}}};
    const std::string tag = eps_tag(eps);
    if (cfg.wants_format("csv")) sink.text("sigma_eps" + tag + ".csv", density_csv(sigma));
    if (cfg.wants_format("bin")) sink.binary("sigma_eps" + tag + ".bin", density_binary(sigma));
    sweeps.push_back(entry);
  }
  out.summary = json{{"sweeps", sweeps}};
  json dts = json::array();
  for (const AdjointDensity& d : densities) dts.push_back(d.dt);
  sink.constants()["dt"] = dts;
  sink.json_file("adjoint.json", out.summary);
  return out;
}

RunResult cmd_mather_lp(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  const VelocityGrid vgrid = velocity_grid_for(cfg, prob.spec, prob.ergodic);
  const HolonomyLP lp = assemble_lp(prob.spec, prob.coupling, prob.grid, vgrid, cfg.atom_budget);
  const MatherLPResult res = solve_mather_lp(lp, cfg.lp_max_iter);
  RunResult out;
  json j = measure_summary_json(res.minimizer, prob.spec, prob.coupling);
  j["lp_value"] = res.value;
  j["lp_iterations"] = res.iterations;
  j["lp_redundant_rows"] = res.redundant_rows;
  j["lambda"] = prob.ergodic.lambda;
  j["qmax"] = vgrid.qmax;
  out.summary = j;
  sink.constants()["eta_vis"] = lp.eta_vis;
  sink.constants()["qmax"] = vgrid.qmax;
  sink.json_file("mather_lp.json", j);
  if (cfg.wants_format("csv")) sink.text("measure_lp.csv", measure_csv(res.minimizer));
  return out;
}

RunResult cmd_mather_adjoint(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  const VelocityGrid vgrid = velocity_grid_for(cfg, prob.spec, prob.ergodic);
  double eps = cfg.eps.front();
  for (double e : cfg.eps) eps = std::min(eps, e);
  Vec x0{0.0, 0.0};
  for (int k = 0; k < cfg.d && k < static_cast<int>(cfg.adjoint_x0.size()); ++k)
    x0[k] = cfg.adjoint_x0[k];
  const int x0_node = prob.grid.nearest_node(x0);

  const GridFunction v0 = mollify(prob.ergodic.v, eps * eps * eps * eps);
  const TimeSlab slab = solve_cauchy_regularized(prob.spec, prob.coupling, eps, v0,
                                                 cauchy_options(cfg, prob.ergodic, true));
  const AdjointDensity sigma = solve_adjoint(prob.spec, prob.coupling, eps, slab, x0_node,
                                             cfg.adjoint_component - 1);
  const DiscreteMeasure mu = measure_from_adjoint(prob.spec, slab, sigma, vgrid);
  RunResult out;
  json j = measure_summary_json(mu, prob.spec, prob.coupling);
  j["eps"] = eps;
  j["x0_node"] = x0_node;
  j["component"] = cfg.adjoint_component;
  j["lambda"] = prob.ergodic.lambda;
  j["qmax"] = vgrid.qmax;
  out.summary = j;
  sink.constants()["qmax"] = vgrid.qmax;
  sink.json_file("mather_adjoint.json", j);
  if (cfg.wants_format("csv")) sink.text("measure_adjoint.csv", measure_csv(mu));
  return out;
}

// shared by compare and uniqueness-set: the instance must admit the closed
// eikonal form (d = 1, component-constant potential)
GridFunction anchored_solution(const HamiltonianSpec& spec, const PeriodicGrid& grid,
                               const std::vector<double>& anchors, double shift) {
  std::vector<int> nodes;
  for (double a : anchors) nodes.push_back(grid.nearest_node(vec1(a)));
  GridFunction v = eikonal_solutions(spec.potential, nodes, grid);
  for (double& x : v.v) x += shift;
  return v;
}

RunResult cmd_compare(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  const VelocityGrid vgrid = velocity_grid_for(cfg, prob.spec, prob.ergodic);
  const GridFunction v1 =
      anchored_solution(prob.spec, prob.grid, cfg.anchors1, cfg.compare_shift1);
  const GridFunction v2 =
      anchored_solution(prob.spec, prob.grid, cfg.anchors2, cfg.compare_shift2);

  std::vector<DiscreteMeasure> measures;
  for (double a : cfg.anchors1)
    measures.push_back(example_measure(prob.grid, vgrid, prob.grid.nearest_node(vec1(a)),
                                       &prob.spec.potential));
  for (double a : cfg.anchors2)
    measures.push_back(example_measure(prob.grid, vgrid, prob.grid.nearest_node(vec1(a)),
                                       &prob.spec.potential));
  const HolonomyLP lp = assemble_lp(prob.spec, prob.coupling, prob.grid, vgrid, cfg.atom_budget);
  const MatherLPResult res = solve_mather_lp(lp, cfg.lp_max_iter);
  for (DiscreteMeasure& mu : sample_optimal_face(lp, res, cfg.face_samples, cfg.seed))
    measures.push_back(std::move(mu));

  const double tol_con = cfg.tol_hyp + 4.0 * prob.grid.h;
  const ComparisonReport rep = check_comparison(v1, v2, measures, cfg.tol_hyp, tol_con);
  RunResult out;
  out.summary = comparison_json(rep);
  out.summary["measures_tested"] = measures.size();
  sink.json_file("comparison.json", out.summary);
  if (cfg.wants_format("csv")) {
    sink.text("v1.csv", grid_function_csv(v1));
    sink.text("v2.csv", grid_function_csv(v2));
    std::string table = "measure,integral_v1,integral_v2,margin\n";
    for (size_t k = 0; k < rep.integrals_v1.size(); ++k)
      table += std::to_string(k) + ',' + fmt_double(rep.integrals_v1[k]) + ',' +
               fmt_double(rep.integrals_v2[k]) + ',' +
               fmt_double(rep.integrals_v2[k] - rep.integrals_v1[k]) + '\n';
    sink.text("comparison_summary.csv", table);
  }
  out.exit_code = rep.pass ? 0 : 1;
  return out;
}

RunResult cmd_uniqueness_set(const RunConfig& cfg, ArtifactSink& sink) {
  SolvedProblem prob = solve_problem(cfg);
  const VelocityGrid vgrid = velocity_grid_for(cfg, prob.spec, prob.ergodic);
  const HolonomyLP lp = assemble_lp(prob.spec, prob.coupling, prob.grid, vgrid, cfg.atom_budget);
  const MatherLPResult res = solve_mather_lp(lp, cfg.lp_max_iter);
  const std::vector<DiscreteMeasure> faces =
      sample_optimal_face(lp, res, cfg.face_samples, cfg.seed);
  const auto uniq = uniqueness_set(faces, cfg.mass_threshold);

  RunResult out;
  json nodes = json::array();
  std::string csv = "node,x0,component\n";
  for (const auto& [node, i] : uniq) {
    nodes.push_back({{"node", node}, {"component", i + 1}});
    csv += std::to_string(node) + ',' + fmt_double(prob.grid.coords(node)[0]) + ',' +
           std::to_string(i + 1) + '\n';
  }
  json j{{"size", uniq.size()},
         {"measures_sampled", faces.size()},
         {"mass_threshold", cfg.mass_threshold},
         {"lp_value", res.value},
         {"entries", nodes}};
  out.summary = j;
  sink.json_file("uniqueness_set.json", j);
  if (cfg.wants_format("csv")) sink.text("uniqueness_set.csv", csv);
  return out;
}

RunResult cmd_suite(const RunConfig& cfg, ArtifactSink& sink) {
  const SuiteReport rep = run_acceptance_suite(cfg);
  RunResult out;
  json results = json::array();
  for (const CriterionResult& r : rep.results)
    results.push_back(
        {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  out.summary = json{{"all_pass", rep.all_pass}, {"criteria", results}};
  sink.json_file("suite.json", out.summary);
  out.exit_code = rep.all_pass ? 0 : 1;
  return out;
}

}  // namespace

RunResult run_command(const std::string& subcommand, const RunConfig& cfg,
                      const std::string& config_text) {
  ArtifactSink sink(cfg, subcommand, config_text);
  RunResult out;
  if (subcommand == "check") out = cmd_check(cfg, sink);
  else if (subcommand == "ergodic") out = cmd_ergodic(cfg, sink);
  else if (subcommand == "cauchy") out = cmd_cauchy(cfg, sink);
  else if (subcommand == "adjoint") out = cmd_adjoint(cfg, sink);
  else if (subcommand == "mather-lp") out = cmd_mather_lp(cfg, sink);
  else if (subcommand == "mather-adjoint") out = cmd_mather_adjoint(cfg, sink);
  else if (subcommand == "compare") out = cmd_compare(cfg, sink);
  else if (subcommand == "uniqueness-set") out = cmd_uniqueness_set(cfg, sink);
  else if (subcommand == "suite") out = cmd_suite(cfg, sink);
  else throw ParseError("unknown subcommand '" + subcommand + "'");
  sink.finish(out);
  return out;
}

}  // namespace wkam
