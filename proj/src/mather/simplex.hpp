#pragma once

#include <cstdint>
#include <vector>

namespace wkam {

// Revised simplex for  min c.x  s.t.  A x = b, x >= 0  with column-sparse A
// and a dense basis inverse. Two-phase start from an artificial basis
// (requires b >= 0). Pivoting is deterministic: most-negative reduced cost
// with lowest-index ties, falling back to Bland's rule whenever the
// objective stalls, which protects the heavily degenerate holonomy systems
// from cycling. Redundant rows are detected in phase one and parked on their
// zero-level artificials.
class RevisedSimplex {
 public:
  struct Matrix {
    int rows = 0;
    std::vector<int32_t> col_ptr{0};  // size cols+1
    std::vector<int32_t> row_idx;
    std::vector<double> val;

    int cols() const { return static_cast<int>(col_ptr.size()) - 1; }
    void add_column(const std::vector<std::pair<int32_t, double>>& entries);
  };

  enum class Status { kOptimal, kInfeasible, kUnbounded, kIterLimit };

  struct Result {
    Status status = Status::kIterLimit;
    std::vector<double> x;  // structural variables only
    double value = 0.0;
    long iterations = 0;
    int redundant_rows = 0;
    double infeasibility = 0.0;  // residual artificial mass after phase one
    int worst_row = -1;          // row of the largest stuck artificial
    std::vector<int> basis;  // column index per row (>= cols() means artificial)
  };

  static Result solve(const Matrix& a, const std::vector<double>& c, const std::vector<double>& b,
                      long max_iter = 200000);
};

}  // namespace wkam
