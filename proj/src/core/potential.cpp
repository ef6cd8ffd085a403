#include "core/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace wkam {

namespace {

void check_dims(int d, int m) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("potential: dimension must be 1 or 2");
  if (m < 1) throw std::invalid_argument("potential: component count must be positive");
}

// Fourier basis element phi_k and its derivative for an n-point lattice.
// The Nyquist mode of an even n is represented by cos so the interpolant of
// real samples is real.
void basis(int n, int k, double x, std::complex<double>& phi, std::complex<double>& dphi) {
  if (n % 2 == 0 && k == n / 2) {
    const double w = M_PI * n;
    phi = std::cos(w * x);
    dphi = -w * std::sin(w * x);
  } else {
    const int kp = (k <= n / 2) ? k : k - n;
    const double w = 2.0 * M_PI * kp;
    phi = std::polar(1.0, w * x);
    dphi = std::complex<double>(0.0, w) * phi;
  }
}

std::vector<std::complex<double>> dft_1d(const std::vector<std::complex<double>>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) s += in[j] * std::polar(1.0, -2.0 * M_PI * k * j / n);
    out[k] = s;
  }
  return out;
}

}  // namespace

Potential Potential::zero(int d, int m) {
  check_dims(d, m);
  Potential p;
  p.d_ = d;
  p.m_ = m;
  p.expr_text_ = "0";
  p.expr_ = Expression::parse("0");
  for (int k = 0; k < kMaxDim; ++k) p.dexpr_[k] = p.expr_.derivative(k);
  return p;
}

Potential Potential::from_expression(const std::string& expr, int d, int m) {
  check_dims(d, m);
  Potential p;
  p.d_ = d;
  p.m_ = m;
  p.expr_text_ = expr;
  p.expr_ = Expression::parse(expr);
  for (int k = 0; k < kMaxDim; ++k) p.dexpr_[k] = p.expr_.derivative(k);
  return p;
}

Potential Potential::from_table(std::vector<double> samples, int d, int n, int m) {
  check_dims(d, m);
  if (n < 4) throw std::invalid_argument("potential table: need at least 4 samples per axis");
  const size_t per_comp = (d == 1) ? static_cast<size_t>(n) : static_cast<size_t>(n) * n;
  if (samples.size() != per_comp * m)
    throw std::invalid_argument("potential table: sample count does not match d, n, m");
  for (double v : samples)
    if (!(v >= 0.0))
      throw std::invalid_argument("potential table: negative or non-finite sample");

  Potential p;
  p.d_ = d;
  p.m_ = m;
  p.expr_text_ = "<table>";
  p.tables_.resize(m);
  for (int i = 0; i < m; ++i) {
    Spectral& t = p.tables_[i];
    t.n = n;
    std::vector<std::complex<double>> buf(per_comp);
    for (size_t j = 0; j < per_comp; ++j) buf[j] = samples[i * per_comp + j];
    if (d == 1) {
      t.coeff = dft_1d(buf);
    } else {
      // row-column DFT; coeff[k + n*l]
      std::vector<std::complex<double>> rows(per_comp);
      for (int jy = 0; jy < n; ++jy) {
        std::vector<std::complex<double>> row(buf.begin() + jy * n, buf.begin() + (jy + 1) * n);
        auto rk = dft_1d(row);
        for (int k = 0; k < n; ++k) rows[k + static_cast<size_t>(n) * jy] = rk[k];
      }
      t.coeff.resize(per_comp);
      for (int k = 0; k < n; ++k) {
        std::vector<std::complex<double>> col(n);
        for (int jy = 0; jy < n; ++jy) col[jy] = rows[k + static_cast<size_t>(n) * jy];
        auto cl = dft_1d(col);
        for (int l = 0; l < n; ++l) t.coeff[k + static_cast<size_t>(n) * l] = cl[l];
      }
    }
  }
  return p;
}

double Potential::table_value(const Spectral& t, const Vec& x) const {
  const int n = t.n;
  std::complex<double> s = 0.0, phi, dphi;
  if (d_ == 1) {
    for (int k = 0; k < n; ++k) {
      basis(n, k, x[0], phi, dphi);
      s += t.coeff[k] * phi;
    }
    return s.real() / n;
  }
  std::vector<std::complex<double>> px(n), py(n);
  for (int k = 0; k < n; ++k) {
    basis(n, k, x[0], px[k], dphi);
    basis(n, k, x[1], py[k], dphi);
  }
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) s += t.coeff[k + static_cast<size_t>(n) * l] * px[k] * py[l];
  return s.real() / (static_cast<double>(n) * n);
}

Vec Potential::table_gradient(const Spectral& t, const Vec& x) const {
  const int n = t.n;
  std::complex<double> phi, dphi;
  Vec g{0.0, 0.0};
  if (d_ == 1) {
    std::complex<double> s = 0.0;
    for (int k = 0; k < n; ++k) {
      basis(n, k, x[0], phi, dphi);
      s += t.coeff[k] * dphi;
    }
    g[0] = s.real() / n;
    return g;
  }
  std::vector<std::complex<double>> px(n), py(n), dpx(n), dpy(n);
  for (int k = 0; k < n; ++k) {
    basis(n, k, x[0], px[k], dpx[k]);
    basis(n, k, x[1], py[k], dpy[k]);
  }
  std::complex<double> sx = 0.0, sy = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      const std::complex<double>& c = t.coeff[k + static_cast<size_t>(n) * l];
      sx += c * dpx[k] * py[l];
      sy += c * px[k] * dpy[l];
    }
  const double norm = static_cast<double>(n) * n;
  g[0] = sx.real() / norm;
  g[1] = sy.real() / norm;
  return g;
}

double Potential::value(const Vec& x, int comp) const {
  if (comp < 1 || comp > m_) throw std::invalid_argument("potential: component out of range");
  if (is_table()) return table_value(tables_[comp - 1], x);
  return expr_.eval(x[0], d_ > 1 ? x[1] : 0.0, comp);
}

Vec Potential::gradient(const Vec& x, int comp) const {
  if (comp < 1 || comp > m_) throw std::invalid_argument("potential: component out of range");
  if (is_table()) return table_gradient(tables_[comp - 1], x);
  Vec g{0.0, 0.0};
  for (int k = 0; k < d_; ++k) g[k] = dexpr_[k].eval(x[0], d_ > 1 ? x[1] : 0.0, comp);
  return g;
}

}  // namespace wkam
