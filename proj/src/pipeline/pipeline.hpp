#pragma once

#include <string>
#include <vector>

#include "evolve/cauchy.hpp"
#include "evolve/ergodic.hpp"
#include "io/config.hpp"
#include "mather/lp.hpp"

#include <json.hpp>

namespace wkam {

// Outcome of one CLI subcommand. exit_code: 0 success, 1 verification or
// solver failure (diagnostics in summary), configuration errors throw before
// a result exists and map to exit 2.
struct RunResult {
  int exit_code = 0;
  nlohmann::json summary;
  std::vector<std::string> artifacts;
};

// subcommand: check | ergodic | cauchy | adjoint | mather-lp | mather-adjoint
//           | compare | uniqueness-set | suite
// config_text is echoed and content-hashed into the manifest ("builtin" when
// empty). Artifacts land under cfg.out_dir.
RunResult run_command(const std::string& subcommand, const RunConfig& cfg,
                      const std::string& config_text);

// Shared stages, exposed for the acceptance suite and tests.
struct SolvedProblem {
  HamiltonianSpec spec;      // normalized when |lambda| exceeded the threshold
  CouplingMatrix coupling;
  PeriodicGrid grid;
  ErgodicSolution ergodic;   // for the (possibly) normalized spec
  double lambda_raw = 0.0;   // ergodic constant of the configured spec
  bool normalized = false;
};

SolvedProblem solve_problem(const RunConfig& cfg);
ErgodicOptions ergodic_options(const RunConfig& cfg);
CauchyOptions cauchy_options(const RunConfig& cfg, const ErgodicSolution& sol, bool dense);
VelocityGrid velocity_grid_for(const RunConfig& cfg, const HamiltonianSpec& spec,
                               const ErgodicSolution& sol);

}  // namespace wkam
