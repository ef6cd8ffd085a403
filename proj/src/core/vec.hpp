#pragma once

#include <array>
#include <cmath>

namespace wkam {

inline constexpr int kMaxDim = 2;

// Fixed-capacity point for d <= 2; slots beyond the active dimension stay 0.
using Vec = std::array<double, kMaxDim>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline double dot(const Vec& a, const Vec& b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

inline double norm_sq(const Vec& a, int d) { return dot(a, a, d); }
inline double norm(const Vec& a, int d) { return std::sqrt(norm_sq(a, d)); }

inline double max_abs(const Vec& a, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s = std::max(s, std::abs(a[k]));
  return s;
}

// Reduce a coordinate to [0,1).
inline double wrap_unit(double x) {
  double y = x - std::floor(x);
  return y == 1.0 ? 0.0 : y;
}

inline Vec wrap_unit(const Vec& x, int d) {
  Vec y{0.0, 0.0};
  for (int k = 0; k < d; ++k) y[k] = wrap_unit(x[k]);
  return y;
}

inline bool all_finite(const Vec& x, int d) {
  for (int k = 0; k < d; ++k)
    if (!std::isfinite(x[k])) return false;
  return true;
}

}  // namespace wkam
