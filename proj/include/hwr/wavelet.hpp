#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hwr/piecewise_polynomial.hpp"

namespace hwr {

/// Spline / vanishing-moment order m, 1 <= m <= 10.
class SplineOrder {
 public:
  static constexpr int kMax = 10;
  explicit SplineOrder(int m);
  int value() const { return m_; }

 private:
  int m_;
};

/// Centered cardinal B-spline of order `order` (degree order-1), support [-order/2, order/2).
/// B_1 is the indicator of [-1/2, 1/2). Total for any order >= 1.
double bspline_eval(int order, double x);
inline double bspline_eval(SplineOrder m, double x) { return bspline_eval(m.value(), x); }

/// B_m as an explicit piecewise polynomial on the integer grid -m/2, ..., m/2.
PiecewisePolynomial bspline_polynomial(int order);

/// q_0 ... q_{3m-2}.
std::vector<double> chui_wang_coefficients(SplineOrder m);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

/// Immutable Chui-Wang wavelet of order m (unnormalized).
class WaveletBasis {
 public:
  explicit WaveletBasis(SplineOrder m);

  int order() const { return m_; }
  /// S = 2m - 1, the support length of psi.
  int support() const { return 2 * m_ - 1; }
  std::span<const double> q() const { return q_; }
  const PiecewisePolynomial& psi() const { return psi_; }

  /// ac(k) = <psi, psi(. - k)>; zero for |k| > 2m - 2.
  double autocorrelation(int k) const;
  std::span<const double> autocorrelation_table() const { return ac_; }  // k = 0 .. 2m-2

  double c_psi() const { return c_psi_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }

  /// out[t] = psi(u + t) for t = 0 .. S-1, u in [0, 1). Evaluated piecewise in the
  /// local coordinate so that u + t is never rounded.
  void translates(double u, double* out) const;

 private:
  int m_;
  std::vector<double> q_;
  PiecewisePolynomial psi_;
  std::vector<double> ac_;
  double c_psi_ = 0.0;
  double gamma_ = 0.0;
  double delta_ = 0.0;
};

WaveletBasis build_basis(SplineOrder m);

/// Upper bound on the number of nonzero translates at one point for any level.
inline int max_active_translates(const WaveletBasis& b) { return b.support(); }

/// Nonzero values of psi^per_{j,k}(x) over k in I_j at one coordinate, k ascending.
/// Writes at most min(2^j, S) entries (1 for j = -1) and returns the count.
/// This is the only evaluation path used for assembly and model evaluation.
int periodized_translates(const WaveletBasis& b, int j, double x, std::uint32_t* k_out, double* v_out);

/// psi^per_{j,k}(x) = 2^{j/2} sum_l psi(2^j (x + l) - k); 1 for j = -1.
double periodized_eval(const WaveletBasis& b, int j, std::int64_t k, double x);

/// Riesz symbol E(theta) = ac(0) + 2 sum_k ac(k) cos(k theta).
double riesz_symbol(const WaveletBasis& b, double theta);

}  // namespace hwr
