#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hwr {

/// Piecewise polynomial on [b_0, b_P) with piece i valid on [b_i, b_{i+1}).
/// Coefficients are stored in the local variable (x - b_i), lowest power first.
/// Outside [b_0, b_P) the function is zero.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<std::vector<double>> coefficients);

  double operator()(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;

  std::size_t pieces() const { return breaks_.empty() ? 0 : breaks_.size() - 1; }
  int degree() const { return stride_ - 1; }
  double lower() const { return breaks_.front(); }
  double upper() const { return breaks_.back(); }
  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> piece(std::size_t i) const {
    return {coeffs_.data() + i * static_cast<std::size_t>(stride_), static_cast<std::size_t>(stride_)};
  }
  /// Index of the piece containing x, or -1 outside the support.
  std::ptrdiff_t locate(double x) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> coeffs_;
  int stride_ = 0;
  double step_ = 0.0;  // nonzero when the grid is uniform
};

/// Horner evaluation of sum_i c[i] t^i, or of its order-th derivative.
double horner(std::span<const double> c, double t, int order = 0);

}  // namespace hwr
