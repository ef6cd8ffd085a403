#pragma once

#include <array>
#include <string>

#include "core/coupling.hpp"
#include "core/hamiltonian.hpp"

namespace wkam {

// One entry per structural assumption on (H, c):
//   A1 convexity of p -> H, A2 superlinear coercivity (both limits),
//   A3 quadratic growth of |D_x H|, A4 symmetry of the switching rates.
struct AssumptionEntry {
  std::string id;
  bool pass = false;
  double margin = 0.0;
  std::string note;
};

struct AssumptionReport {
  std::array<AssumptionEntry, 4> entries;
  int sample_budget = 0;
  double p_max = 0.0;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

// Sampled verification on the box |p| <= p_max (p_max = 0 picks a default from
// the a-priori gradient radius when the view was built from a spec, else 8).
// Failures are reported, never thrown.
AssumptionReport check_assumptions(const HamiltonianView& h, const CouplingMatrix& c,
                                   int sample_budget, double p_max = 0.0);

}  // namespace wkam
