#include "hwr/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hwr/errors.hpp"

namespace hwr {

namespace {

using Poly = std::vector<double>;

// Local-coordinate pieces of B_order on [i - order/2, i + 1 - order/2], t in [0, 1].
std::vector<Poly> bspline_pieces(int order) {
  std::vector<Poly> prev{Poly{1.0}};
  for (int r = 2; r <= order; ++r) {
    std::vector<Poly> cur(static_cast<std::size_t>(r), Poly(static_cast<std::size_t>(r), 0.0));
    const double inv = 1.0 / static_cast<double>(r - 1);
    for (int i = 0; i < r; ++i) {
      auto& out = cur[static_cast<std::size_t>(i)];
      if (i < r - 1) {  // (t + i) P_i
        const auto& p = prev[static_cast<std::size_t>(i)];
        for (std::size_t d = 0; d < p.size(); ++d) {
          out[d] += i * p[d];
          out[d + 1] += p[d];
        }
      }
      if (i >= 1) {  // (r - i - t) P_{i-1}
        const auto& p = prev[static_cast<std::size_t>(i - 1)];
        for (std::size_t d = 0; d < p.size(); ++d) {
          out[d] += (r - i) * p[d];
          out[d + 1] -= p[d];
        }
      }
      for (double& c : out) c *= inv;
    }
    prev = std::move(cur);
  }
  return prev;
}

double level_scale(int j) {
  return (j % 2 == 0) ? std::ldexp(1.0, j / 2) : std::ldexp(std::numbers::sqrt2, (j - 1) / 2);
}

}  // namespace

SplineOrder::SplineOrder(int m) : m_(m) {
  if (m < 1 || m > kMax) throw Error(Errc::OrderOutOfRange, "spline order must lie in [1, 10], got " + std::to_string(m));
}

double bspline_eval(int order, double x) {
  if (order < 1 || !std::isfinite(x)) return 0.0;
  const double half = 0.5 * order;
  // piece index from exact comparisons with the (half-)integer breakpoints
  double fl = std::floor(x + half);
  if (x < fl - half) fl -= 1.0;
  else if (x >= fl + 1.0 - half) fl += 1.0;
  if (fl < 0.0 || fl >= order) return 0.0;
  const int piece = static_cast<int>(fl);
  const double t = x - (fl - half);
  // Triangular scheme on the values of all pieces at t; every term is nonnegative.
  double v[2 * SplineOrder::kMax + 2] = {1.0};
  for (int r = 2; r <= order; ++r) {
    const double inv = 1.0 / (r - 1);
    for (int i = r - 1; i >= 0; --i) {
      const double a = (i < r - 1) ? (t + i) * v[i] : 0.0;
      const double b = (i >= 1) ? (r - i - t) * v[i - 1] : 0.0;
      v[i] = (a + b) * inv;
    }
  }
  return v[piece];
}

PiecewisePolynomial bspline_polynomial(int order) {
  if (order < 1) throw Error(Errc::OrderOutOfRange, "bspline order must be positive");
  std::vector<double> br(static_cast<std::size_t>(order) + 1);
  for (int i = 0; i <= order; ++i) br[static_cast<std::size_t>(i)] = i - 0.5 * order;
  return PiecewisePolynomial(std::move(br), bspline_pieces(order));
}

std::vector<double> chui_wang_coefficients(SplineOrder order) {
  const int m = order.value();
  std::vector<double> q(static_cast<std::size_t>(3 * m - 1), 0.0);
  const double scale = std::ldexp(1.0, -(m - 1));
  for (int n = 0; n <= 3 * m - 2; ++n) {
    double s = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
      s += binom * bspline_eval(2 * m, n + 1 - k - m);
      binom = binom * (m - k) / (k + 1);
    }
    q[static_cast<std::size_t>(n)] = ((n % 2 == 0) ? scale : -scale) * s;
  }
  return q;
}

GaussRule gauss_legendre(int points) {
  if (points < 1) throw Error(Errc::InvalidArgument, "Gauss-Legendre needs at least one node");
  GaussRule g;
  g.nodes.resize(static_cast<std::size_t>(points));
  g.weights.resize(static_cast<std::size_t>(points));
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[static_cast<std::size_t>(i)] = -x;
    g.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    g.weights[static_cast<std::size_t>(i)] = w;
    g.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return g;
}

WaveletBasis::WaveletBasis(SplineOrder order) : m_(order.value()), q_(chui_wang_coefficients(order)) {
  const int m = m_;
  const int S = 2 * m - 1;
  const int pieces = 2 * S;

  // psi(p/2 + s) = sum_n q_n P_{p-n}(2s), s in [0, 1/2]
  const auto B = bspline_pieces(m);
  std::vector<std::vector<double>> coeffs(static_cast<std::size_t>(pieces), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int p = 0; p < pieces; ++p) {
    auto& c = coeffs[static_cast<std::size_t>(p)];
    for (int n = 0; n <= 3 * m - 2; ++n) {
      const int i = p - n;
      if (i < 0 || i >= m) continue;
      const auto& Bi = B[static_cast<std::size_t>(i)];
      for (int d = 0; d < m; ++d) c[static_cast<std::size_t>(d)] += q_[static_cast<std::size_t>(n)] * Bi[static_cast<std::size_t>(d)];
    }
    for (int d = 0; d < m; ++d) c[static_cast<std::size_t>(d)] = std::ldexp(c[static_cast<std::size_t>(d)], d);
  }
  std::vector<double> br(static_cast<std::size_t>(pieces) + 1);
  for (int p = 0; p <= pieces; ++p) br[static_cast<std::size_t>(p)] = 0.5 * p;
  psi_ = PiecewisePolynomial(std::move(br), std::move(coeffs));

  // Autocorrelation by m-point Gauss-Legendre per half-integer piece (exact for degree 2m-2).
  const GaussRule g = gauss_legendre(m);
  ac_.assign(static_cast<std::size_t>(2 * m - 1), 0.0);
  for (int k = 0; k <= 2 * m - 2; ++k) {
    double sum = 0.0;
    for (int p = 2 * k; p < pieces; ++p) {
      const auto a = psi_.piece(static_cast<std::size_t>(p));
      const auto b = psi_.piece(static_cast<std::size_t>(p - 2 * k));
      double part = 0.0;
      for (std::size_t r = 0; r < g.nodes.size(); ++r) {
        const double s = 0.25 * (g.nodes[r] + 1.0);
        part += g.weights[r] * horner(a, s) * horner(b, s);
      }
      sum += 0.25 * part;
    }
    ac_[static_cast<std::size_t>(k)] = sum;
  }

  // c_psi = sup_u sum_t psi(u + t)^2: scan each half-piece, then Newton-polish the candidates.
  auto F = [&](int h, double s, int order_d) {
    double v = 0.0;
    for (int t = 0; t < S; ++t) {
      const auto c = psi_.piece(static_cast<std::size_t>(2 * t + h));
      const double p0 = horner(c, s), p1 = horner(c, s, 1), p2 = horner(c, s, 2);
      if (order_d == 0) v += p0 * p0;
      else if (order_d == 1) v += 2.0 * p0 * p1;
      else v += 2.0 * (p1 * p1 + p0 * p2);
    }
    return v;
  };
  constexpr int kScan = 64;
  double best = 0.0;
  for (int h = 0; h < 2; ++h) {
    std::vector<double> vals(kScan + 1);
    for (int i = 0; i <= kScan; ++i) vals[static_cast<std::size_t>(i)] = F(h, 0.5 * i / kScan, 0);
    for (int i = 0; i <= kScan; ++i) {
      const double v = vals[static_cast<std::size_t>(i)];
      best = std::max(best, v);
      const bool left_ok = i == 0 || v >= vals[static_cast<std::size_t>(i - 1)];
      const bool right_ok = i == kScan || v >= vals[static_cast<std::size_t>(i + 1)];
      if (!(left_ok && right_ok)) continue;
      double s = 0.5 * i / kScan;
      for (int it = 0; it < 8; ++it) {
        const double d2 = F(h, s, 2);
        if (!(d2 < 0.0)) break;
        const double next = std::clamp(s - F(h, s, 1) / d2, 0.0, 0.5);
        if (std::abs(next - s) < 1e-15) break;
        s = next;
      }
      best = std::max(best, F(h, s, 0));
    }
  }
  c_psi_ = best;

  // Riesz bounds: extreme eigenvalues of the level-12 circulant.
  constexpr int kLevel = 12;
  const int P = 1 << kLevel;
  gamma_ = INFINITY;
  delta_ = -INFINITY;
  for (int r = 0; r < P; ++r) {
    const double e = riesz_symbol(*this, 2.0 * std::numbers::pi * r / P);
    gamma_ = std::min(gamma_, e);
    delta_ = std::max(delta_, e);
  }
}

double WaveletBasis::autocorrelation(int k) const {
  const int a = k < 0 ? -k : k;
  return a <= 2 * m_ - 2 ? ac_[static_cast<std::size_t>(a)] : 0.0;
}

void WaveletBasis::translates(double u, double* out) const {
  const int S = support();
  const int h = u >= 0.5 ? 1 : 0;
  const double s = h ? u - 0.5 : u;
  for (int t = 0; t < S; ++t) {
    const auto c = psi_.piece(static_cast<std::size_t>(2 * t + h));
    double acc = 0.0;
    for (std::size_t d = c.size(); d-- > 0;) acc = acc * s + c[d];
    out[t] = acc;
  }
}

WaveletBasis build_basis(SplineOrder m) { return WaveletBasis(m); }

int periodized_translates(const WaveletBasis& b, int j, double x, std::uint32_t* k_out, double* v_out) {
  if (j < 0) {
    k_out[0] = 0;
    v_out[0] = 1.0;
    return 1;
  }
  const int S = b.support();
  const std::int64_t P = std::int64_t{1} << j;
  const double z = std::ldexp(x, j);
  const double fl = std::floor(z);
  const double u = z - fl;
  std::int64_t f = static_cast<std::int64_t>(fl) % P;
  if (f < 0) f += P;

  double vals[2 * SplineOrder::kMax];
  b.translates(u, vals);  // vals[t] belongs to translation k = f - t
  const double scale = level_scale(j);
  int count = 0;
  auto emit = [&](std::int64_t k, double v) {
    if (v != 0.0) {
      k_out[count] = static_cast<std::uint32_t>(k);
      v_out[count] = v * scale;
      ++count;
    }
  };
  if (P >= S) {
    for (std::int64_t t = std::min<std::int64_t>(f, S - 1); t >= 0; --t) emit(f - t, vals[t]);
    for (std::int64_t t = S - 1; t > f; --t) emit(P + f - t, vals[t]);
  } else {
    double acc[2 * SplineOrder::kMax] = {};
    for (int t = 0; t < S; ++t) {
      std::int64_t k = (f - t) % P;
      if (k < 0) k += P;
      acc[k] += vals[t];
    }
    for (std::int64_t k = 0; k < P; ++k) emit(k, acc[k]);
  }
  return count;
}

double periodized_eval(const WaveletBasis& b, int j, std::int64_t k, double x) {
  if (j < -1 || j > 31) throw Error(Errc::BadTranslation, "level out of range: " + std::to_string(j));
  if (j == -1) {
    if (k != 0) throw Error(Errc::BadTranslation, "level -1 only has translation 0");
    return 1.0;
  }
  if (k < 0 || k >= (std::int64_t{1} << j))
    throw Error(Errc::BadTranslation, "translation " + std::to_string(k) + " outside I_" + std::to_string(j));
  std::uint32_t ks[2 * SplineOrder::kMax];
  double vs[2 * SplineOrder::kMax];
  const int n = periodized_translates(b, j, x, ks, vs);
  for (int i = 0; i < n; ++i)
    if (ks[i] == static_cast<std::uint32_t>(k)) return vs[i];
  return 0.0;
}

double riesz_symbol(const WaveletBasis& b, double theta) {
  const auto ac = b.autocorrelation_table();
  double e = ac[0];
  for (std::size_t k = 1; k < ac.size(); ++k) e += 2.0 * ac[k] * std::cos(static_cast<double>(k) * theta);
  return e;
}

}  // namespace hwr
