#include "core/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "grid/grid.hpp"

namespace wkam {

CouplingMatrix CouplingMatrix::zero(int m) {
  if (m < 1) throw std::invalid_argument("coupling: component count must be positive");
  CouplingMatrix out;
  out.m = m;
  out.c.assign(static_cast<size_t>(m) * m, 0.0);
  return out;
}

CouplingMatrix CouplingMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int m = static_cast<int>(rows.size());
  CouplingMatrix out = zero(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(rows[i].size()) != m)
      throw std::invalid_argument("coupling: matrix is not square");
    for (int j = 0; j < m; ++j) {
      const double v = rows[i][j];
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("coupling: rates must be finite and nonnegative");
      out.at(i, j) = v;
    }
  }
  return out;
}

bool CouplingMatrix::symmetric(double tol) const {
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
  return true;
}

double CouplingMatrix::max_row_sum() const {
  double s = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) row += at(i, j);
    s = std::max(s, row);
  }
  return s;
}

void CouplingMatrix::apply_node(const double* u, double* out) const {
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      s += at(i, j) * (u[i] - u[j]);
    }
    out[i] = s;
  }
}

GridFunction apply_coupling(const CouplingMatrix& c, const GridFunction& phi) {
  if (phi.grid.m != c.m)
    throw std::invalid_argument("apply_coupling: component count mismatch");
  GridFunction out(phi.grid);
  for (int node = 0; node < phi.grid.nodes(); ++node)
    c.apply_node(&phi.v[static_cast<size_t>(node) * c.m],
                 &out.v[static_cast<size_t>(node) * c.m]);
  return out;
}

}  // namespace wkam
