#include "hwr/piecewise_polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "hwr/errors.hpp"

namespace hwr {

double horner(std::span<const double> c, double t, int order) {
  const int n = static_cast<int>(c.size());
  if (order >= n) return 0.0;
  double acc = 0.0;
  for (int i = n - 1; i >= order; --i) {
    double f = c[static_cast<std::size_t>(i)];
    for (int r = 0; r < order; ++r) f *= static_cast<double>(i - r);
    acc = acc * t + f;
  }
  return acc;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> coefficients)
    : breaks_(std::move(breakpoints)) {
  if (breaks_.size() < 2 || coefficients.size() != breaks_.size() - 1)
    throw Error(Errc::LengthMismatch, "piecewise polynomial needs P+1 breakpoints for P pieces");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1]))
      throw Error(Errc::InvalidArgument, "breakpoints must be strictly increasing");
  std::size_t width = 1;
  for (const auto& c : coefficients) width = std::max(width, c.size());
  stride_ = static_cast<int>(width);
  coeffs_.assign(coefficients.size() * width, 0.0);
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    std::copy(coefficients[i].begin(), coefficients[i].end(), coeffs_.begin() + static_cast<std::ptrdiff_t>(i * width));

  const double h = breaks_[1] - breaks_[0];
  bool uniform = true;
  for (std::size_t i = 0; i < breaks_.size(); ++i)
    if (breaks_[i] != breaks_[0] + static_cast<double>(i) * h) uniform = false;
  step_ = uniform ? h : 0.0;
}

std::ptrdiff_t PiecewisePolynomial::locate(double x) const {
  if (!(x >= breaks_.front()) || !(x < breaks_.back())) return -1;
  const auto P = static_cast<std::ptrdiff_t>(pieces());
  std::ptrdiff_t i;
  if (step_ > 0.0) {
    i = static_cast<std::ptrdiff_t>(std::floor((x - breaks_.front()) / step_));
    i = std::clamp<std::ptrdiff_t>(i, 0, P - 1);
    // guard against rounding in the division
    while (i > 0 && x < breaks_[static_cast<std::size_t>(i)]) --i;
    while (i + 1 < P && x >= breaks_[static_cast<std::size_t>(i + 1)]) ++i;
  } else {
    i = std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin() - 1;
  }
  return i;
}

double PiecewisePolynomial::derivative(double x, int order) const {
  const auto i = locate(x);
  if (i < 0) return 0.0;
  return horner(piece(static_cast<std::size_t>(i)), x - breaks_[static_cast<std::size_t>(i)], order);
}

}  // namespace hwr
