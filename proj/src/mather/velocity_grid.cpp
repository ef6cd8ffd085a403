#include "mather/velocity_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wkam {

VelocityGrid make_velocity_grid(int d, int nq, double qmax) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("velocity grid: dimension must be 1 or 2");
  if (nq < 3 || nq % 2 == 0)
    throw std::invalid_argument("velocity grid: point count must be odd and at least 3");
  if (!(qmax > 0.0)) throw std::invalid_argument("velocity grid: truncation radius must be positive");
  VelocityGrid v;
  v.d = d;
  v.nq = nq;
  v.qmax = qmax;
  v.hq = 2.0 * qmax / (nq - 1);
  return v;
}

Vec VelocityGrid::qnode(int flat) const {
  const int kx = d == 1 ? flat : flat % nq;
  const int ky = d == 1 ? 0 : flat / nq;
  Vec q{-qmax + kx * hq, 0.0};
  if (d == 2) q[1] = -qmax + ky * hq;
  return q;
}

int VelocityGrid::zero_node() const {
  const int mid = (nq - 1) / 2;
  return d == 1 ? mid : mid + nq * mid;
}

int VelocityGrid::nearest(const Vec& q) const {
  int idx[kMaxDim] = {0, 0};
  for (int k = 0; k < d; ++k) {
    if (std::abs(q[k]) > qmax + 0.5 * hq)
      throw std::invalid_argument(
          "velocity grid: q outside the truncation box; increase qmax to at least " +
          std::to_string(std::abs(q[k])));
    const int j = static_cast<int>(std::lround((q[k] + qmax) / hq));
    idx[k] = std::min(std::max(j, 0), nq - 1);
  }
  return d == 1 ? idx[0] : idx[0] + nq * idx[1];
}

}  // namespace wkam
