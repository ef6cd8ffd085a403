#pragma once

#include <vector>

namespace wkam {

struct GridFunction;

// Switching-rate matrix of the zeroth-order coupling
//   (Theta u)(x,i) = sum_j c[i][j] (u(x,i) - u(x,j)).
// Entries must be nonnegative; the diagonal never contributes. Symmetry is an
// assumption checked separately, not a construction invariant, so that the
// checker can report its violation.
struct CouplingMatrix {
  int m = 1;
  std::vector<double> c;  // row-major m*m

  static CouplingMatrix zero(int m);
  static CouplingMatrix from_rows(const std::vector<std::vector<double>>& rows);

  double at(int i, int j) const { return c[static_cast<size_t>(i) * m + j]; }
  double& at(int i, int j) { return c[static_cast<size_t>(i) * m + j]; }

  bool symmetric(double tol = 0.0) const;
  double max_row_sum() const;  // max_i sum_{j != i} c_ij

  // Theta applied to the m-vector u at one spatial node.
  void apply_node(const double* u, double* out) const;
};

GridFunction apply_coupling(const CouplingMatrix& c, const GridFunction& phi);

}  // namespace wkam
