#pragma once

#include <complex>
#include <string>
#include <vector>

#include "core/expression.hpp"
#include "core/vec.hpp"

namespace wkam {

// Potential term f(x,i) >= 0 of the Hamiltonian. Backed either by a closed-form
// expression (exact derivatives via symbolic differentiation) or by a sampled
// table on a uniform periodic lattice, interpolated trigonometrically so that
// periodicity is exact and the gradient is spectral.
class Potential {
 public:
  Potential() = default;

  static Potential zero(int d, int m);
  static Potential from_expression(const std::string& expr, int d, int m);

  // samples[i * n^d + node] with node = kx + n*ky, lattice x_k = k/n.
  // Sampled tables must be nonnegative; violations throw at load.
  static Potential from_table(std::vector<double> samples, int d, int n, int m);

  double value(const Vec& x, int comp) const;  // comp is 1-based
  Vec gradient(const Vec& x, int comp) const;

  int dim() const { return d_; }
  int components() const { return m_; }
  bool is_table() const { return !tables_.empty(); }
  const std::string& expression_text() const { return expr_text_; }

 private:
  int d_ = 1;
  int m_ = 1;

  // expression backend
  std::string expr_text_;
  Expression expr_;
  Expression dexpr_[kMaxDim];

  // table backend: full DFT coefficients per component
  struct Spectral {
    int n = 0;
    std::vector<std::complex<double>> coeff;  // n (d=1) or n*n (d=2), unnormalized DFT
  };
  std::vector<Spectral> tables_;

  double table_value(const Spectral& t, const Vec& x) const;
  Vec table_gradient(const Spectral& t, const Vec& x) const;
};

}  // namespace wkam
