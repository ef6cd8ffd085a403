#include "mather/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/errors.hpp"

namespace wkam {

namespace {

constexpr double kReducedCostTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kSmallPivot = 1e-6;
constexpr double kFeasTol = 1e-7;
constexpr int kRefactorEvery = 128;
constexpr int kStallLimit = 64;

struct Tableau {
  const RevisedSimplex::Matrix& a;
  int m;                        // rows
  int n;                        // structural columns
  std::vector<double> binv;     // m x m row-major
  std::vector<int> basis;       // column per row; >= n means artificial (n + r)
  std::vector<double> xb;       // basic values
  const std::vector<double>& b;

  Tableau(const RevisedSimplex::Matrix& mat, const std::vector<double>& rhs)
      : a(mat), m(mat.rows), n(mat.cols()), b(rhs) {
    binv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) binv[static_cast<size_t>(r) * m + r] = 1.0;
    basis.resize(m);
    for (int r = 0; r < m; ++r) basis[r] = n + r;
    xb = rhs;
  }

  // d = B^{-1} a_j for a structural or artificial column
  void ftran(int j, std::vector<double>& d) const {
    d.assign(m, 0.0);
    if (j >= n) {
      const int r = j - n;
      for (int i = 0; i < m; ++i) d[i] = binv[static_cast<size_t>(i) * m + r];
      return;
    }
    for (int32_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      const int row = a.row_idx[k];
      const double v = a.val[k];
      for (int i = 0; i < m; ++i) d[i] += binv[static_cast<size_t>(i) * m + row] * v;
    }
  }

  double col_dot(int j, const std::vector<double>& y) const {
    if (j >= n) return y[j - n];
    double s = 0.0;
    for (int32_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) s += y[a.row_idx[k]] * a.val[k];
    return s;
  }

  // y = cB^T B^{-1}
  void btran(const std::vector<double>& cost, std::vector<double>& y) const {
    y.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      const int j = basis[r];
      const double cb = j >= n ? cost[static_cast<size_t>(n) + (j - n)] : cost[j];
      if (cb == 0.0) continue;
      const double* row = &binv[static_cast<size_t>(r) * m];
      for (int i = 0; i < m; ++i) y[i] += cb * row[i];
    }
  }

  void pivot(int leave_pos, int enter, const std::vector<double>& d) {
    const double piv = d[leave_pos];
    double* lrow = &binv[static_cast<size_t>(leave_pos) * m];
    for (int i = 0; i < m; ++i) lrow[i] /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave_pos) continue;
      const double f = d[r];
      if (f == 0.0) continue;
      double* row = &binv[static_cast<size_t>(r) * m];
      for (int i = 0; i < m; ++i) row[i] -= f * lrow[i];
    }
    const double step = std::max(xb[leave_pos], 0.0) / piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave_pos) continue;
      xb[r] -= step * d[r];
      if (xb[r] < 0.0 && xb[r] > -1e-9) xb[r] = 0.0;
    }
    xb[leave_pos] = step;
    basis[leave_pos] = enter;
  }

  // rebuild B^{-1} from the basis by Gauss-Jordan with partial pivoting
  void refactor() {
    std::vector<double> bmat(static_cast<size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
      const int j = basis[r];
      if (j >= n) {
        bmat[static_cast<size_t>(j - n) * m + r] = 1.0;
      } else {
        for (int32_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k)
          bmat[static_cast<size_t>(a.row_idx[k]) * m + r] = a.val[k];
      }
    }
    std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) inv[static_cast<size_t>(r) * m + r] = 1.0;
    for (int col = 0; col < m; ++col) {
      int piv = col;
      double best = std::abs(bmat[static_cast<size_t>(col) * m + col]);
      for (int r = col + 1; r < m; ++r) {
        const double cand = std::abs(bmat[static_cast<size_t>(r) * m + col]);
        if (cand > best) {
          best = cand;
          piv = r;
        }
      }
      if (best < 1e-14) throw InternalError("simplex: singular basis during refactorization");
      if (piv != col) {
        for (int i = 0; i < m; ++i) {
          std::swap(bmat[static_cast<size_t>(piv) * m + i], bmat[static_cast<size_t>(col) * m + i]);
          std::swap(inv[static_cast<size_t>(piv) * m + i], inv[static_cast<size_t>(col) * m + i]);
        }
      }
      const double p = bmat[static_cast<size_t>(col) * m + col];
      for (int i = 0; i < m; ++i) {
        bmat[static_cast<size_t>(col) * m + i] /= p;
        inv[static_cast<size_t>(col) * m + i] /= p;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = bmat[static_cast<size_t>(r) * m + col];
        if (f == 0.0) continue;
        for (int i = 0; i < m; ++i) {
          bmat[static_cast<size_t>(r) * m + i] -= f * bmat[static_cast<size_t>(col) * m + i];
          inv[static_cast<size_t>(r) * m + i] -= f * inv[static_cast<size_t>(col) * m + i];
        }
      }
    }
    binv = std::move(inv);
    // refresh basic values
    xb.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += binv[static_cast<size_t>(r) * m + i] * b[i];
      xb[r] = s < 0.0 && s > -1e-11 ? 0.0 : s;
    }
  }

  double objective(const std::vector<double>& cost) const {
    double s = 0.0;
    for (int r = 0; r < m; ++r) {
      const int j = basis[r];
      s += (j >= n ? cost[static_cast<size_t>(n) + (j - n)] : cost[j]) * xb[r];
    }
    return s;
  }
};

// One simplex phase. `allow` masks the columns that may enter.
RevisedSimplex::Status run_phase(Tableau& t, const std::vector<double>& cost,
                                 const std::vector<bool>& allow, long max_iter, long& iters) {
  std::vector<double> y, d;
  int since_refactor = 0;
  int stall = 0;
  bool bland = false;
  double last_obj = std::numeric_limits<double>::infinity();

  for (;;) {
    if (iters >= max_iter) return RevisedSimplex::Status::kIterLimit;
    ++iters;
    t.btran(cost, y);

    int enter = -1;
    double best_rc = -kReducedCostTol;
    const int total = t.n + t.m;
    for (int j = 0; j < total; ++j) {
      if (!allow[j]) continue;
      const double cj = j >= t.n ? cost[static_cast<size_t>(t.n) + (j - t.n)] : cost[j];
      const double rc = cj - t.col_dot(j, y);
      if (rc < best_rc) {
        enter = j;
        if (bland) break;  // lowest eligible index
        best_rc = rc;
      }
    }
    if (enter < 0) return RevisedSimplex::Status::kOptimal;

    int leave = -1;
    for (int attempt = 0; attempt < 2; ++attempt) {
      t.ftran(enter, d);
      double min_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < t.m; ++r)
        if (d[r] > kPivotTol) min_ratio = std::min(min_ratio, std::max(t.xb[r], 0.0) / d[r]);
      if (!std::isfinite(min_ratio)) return RevisedSimplex::Status::kUnbounded;

      // second pass: among near-minimal ratios prefer the largest pivot for
      // stability; in anti-cycling mode take the lowest basis index instead
      const double ratio_cut = min_ratio + 1e-9 * (1.0 + std::abs(min_ratio));
      leave = -1;
      double best_piv = 0.0;
      for (int r = 0; r < t.m; ++r) {
        if (d[r] <= kPivotTol || std::max(t.xb[r], 0.0) / d[r] > ratio_cut) continue;
        if (bland) {
          if (leave < 0 || t.basis[r] < t.basis[leave]) leave = r;
        } else if (d[r] > best_piv ||
                   (d[r] == best_piv && leave >= 0 && t.basis[r] < t.basis[leave])) {
          best_piv = d[r];
          leave = r;
        }
      }
      // a tiny pivot usually means the factorization is stale: rebuild once
      if (attempt == 0 && (leave < 0 || d[leave] < kSmallPivot)) {
        t.refactor();
        since_refactor = 0;
        continue;
      }
      break;
    }
    if (leave < 0) return RevisedSimplex::Status::kUnbounded;

    t.pivot(leave, enter, d);
    if (++since_refactor >= kRefactorEvery) {
      t.refactor();
      since_refactor = 0;
    }

    const double obj = t.objective(cost);
    if (obj < last_obj - 1e-13) {
      stall = 0;
      bland = false;
    } else if (++stall > kStallLimit) {
      bland = true;  // anti-cycling mode until strict progress resumes
    }
    last_obj = obj;
  }
}

}  // namespace

void RevisedSimplex::Matrix::add_column(const std::vector<std::pair<int32_t, double>>& entries) {
  for (const auto& [r, v] : entries) {
    row_idx.push_back(r);
    val.push_back(v);
  }
  col_ptr.push_back(static_cast<int32_t>(row_idx.size()));
}

RevisedSimplex::Result RevisedSimplex::solve(const Matrix& a, const std::vector<double>& c,
                                             const std::vector<double>& b, long max_iter) {
  const int m = a.rows;
  const int n = a.cols();
  if (static_cast<int>(c.size()) != n || static_cast<int>(b.size()) != m)
    throw std::invalid_argument("simplex: dimension mismatch");
  for (double v : b)
    if (v < 0.0) throw std::invalid_argument("simplex: rhs must be nonnegative");

  Tableau t(a, b);
  Result out;

  // phase 1: minimize the artificial mass
  std::vector<double> cost1(static_cast<size_t>(n) + m, 0.0);
  for (int r = 0; r < m; ++r) cost1[static_cast<size_t>(n) + r] = 1.0;
  std::vector<bool> allow(static_cast<size_t>(n) + m, true);
  Status st = run_phase(t, cost1, allow, max_iter, out.iterations);
  if (st == Status::kIterLimit) {
    out.status = st;
    return out;
  }
  out.infeasibility = t.objective(cost1);
  if (out.infeasibility > kFeasTol) {
    out.status = Status::kInfeasible;
    for (int r = 0; r < m; ++r)
      if (t.basis[r] >= n && (out.worst_row < 0 || t.xb[r] > t.xb[out.worst_row]))
        out.worst_row = r;
    out.basis = t.basis;
    return out;
  }

  // drive artificials off the basis where possible; park the rest on
  // redundant rows at zero level. The replacement is the column with the
  // largest pivot in the stuck row of B^{-1} A.
  std::vector<double> d, brow(static_cast<size_t>(m));
  for (int r = 0; r < m; ++r) {
    if (t.basis[r] < n) continue;
    for (int i = 0; i < m; ++i) brow[i] = t.binv[static_cast<size_t>(r) * m + i];
    int replacement = -1;
    double best = 1e-7;
    for (int j = 0; j < n; ++j) {
      bool basic = false;
      for (int rr = 0; rr < m && !basic; ++rr) basic = t.basis[rr] == j;
      if (basic) continue;
      double v = 0.0;
      for (int32_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k)
        v += brow[a.row_idx[k]] * a.val[k];
      if (std::abs(v) > best) {
        best = std::abs(v);
        replacement = j;
      }
    }
    if (replacement >= 0) {
      t.ftran(replacement, d);
      t.pivot(r, replacement, d);
    } else {
      ++out.redundant_rows;
    }
  }
  t.refactor();

  // phase 2: artificials may not re-enter
  std::vector<double> cost2(static_cast<size_t>(n) + m, 0.0);
  for (int j = 0; j < n; ++j) cost2[j] = c[j];
  for (int j = n; j < n + m; ++j) allow[j] = false;
  st = run_phase(t, cost2, allow, max_iter, out.iterations);
  out.status = st;
  out.basis = t.basis;
  if (st != Status::kOptimal) return out;

  out.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r)
    if (t.basis[r] < n) out.x[t.basis[r]] = std::max(t.xb[r], 0.0);
  out.value = 0.0;
  for (int j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  return out;
}

}  // namespace wkam
