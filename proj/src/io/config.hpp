#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/coupling.hpp"
#include "core/hamiltonian.hpp"
#include "grid/grid.hpp"

namespace wkam {

// Minimal TOML-style value: string, number, boolean, or (nested) array.
struct ConfigValue {
  enum class Kind { kString, kNumber, kBool, kArray };
  Kind kind = Kind::kNumber;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<ConfigValue> arr;
};

// Flat table keyed by "section.key". Throws ParseError with line diagnostics.
std::map<std::string, ConfigValue> parse_config_text(const std::string& text);

// Run configuration: problem family and potential, discretization,
// solver knobs, comparison instance, output options.
struct RunConfig {
  // [problem]
  std::string family = "quadratic";
  std::string potential = "sin(pi*x)^2";
  std::string potential_table;  // CSV path; used instead of `potential` when set
  int d = 1;
  int m = 2;
  double shift = 0.0;
  std::vector<std::vector<double>> coupling;                 // empty: all-ones off-diagonal
  std::vector<std::vector<std::vector<double>>> anisotropy;  // per component d x d

  // [discretization]
  int n = 64;
  int nq = 17;
  double qmax = 0.0;  // 0: derived from the Lipschitz bound + 1
  std::vector<double> eps{0.2, 0.1, 0.05};
  double cfl_safety = 0.5;
  int store_every = 0;

  // [solver]
  double tol = 1e-3;
  double polish_tol = 1e-9;
  long max_sweeps = 50000;
  long lp_max_iter = 500000;
  uint64_t atom_budget = 2000000;
  uint64_t seed = 42;
  std::string dissipation = "local";  // local | global
  // Ergodic constants inside this band are discretization zero and are not
  // shifted away; 0 forces normalization of every nonzero constant.
  double normalize_tol = 0.05;
  int face_samples = 32;
  double mass_threshold = 0.01;
  double crosscheck_horizon = 50.0;
  int sample_budget = 2000;
  std::vector<double> adjoint_x0{0.0, 0.0};
  int adjoint_component = 1;

  // [compare]
  std::vector<double> anchors1{0.0};
  std::vector<double> anchors2{0.0};
  double compare_shift1 = 0.0;
  double compare_shift2 = 0.0;
  double tol_hyp = 1e-3;

  // [output]
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json", "bin"};

  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
  // dotted key, e.g. "discretization.N" or "solver.seed"
  void apply_override(const std::string& key, const std::string& value);
  void validate() const;

  HamiltonianSpec build_spec() const;
  CouplingMatrix build_coupling() const;
  PeriodicGrid build_grid() const;
  bool wants_format(const std::string& fmt) const;
};

}  // namespace wkam
