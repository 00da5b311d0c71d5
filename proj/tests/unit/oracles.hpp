#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hwr/hwr.hpp"

namespace oracle {

/// Seeded generator for property tests (independent of the library RNG).
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed * 2654435761ULL + 0x1234567ULL) {}
  std::uint64_t next() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return s_;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double torus() { return uniform() - 0.5; }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t s_;
};

/// B_m(x) = 1/(m-1)! sum_k (-1)^k C(m,k) (x + m/2 - k)_+^{m-1}; closed-left for m = 1.
inline double bspline_truncated_power(int m, double x) {
  if (m == 1) return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
  long double s = 0.0L, binom = 1.0L, fact = 1.0L;
  for (int i = 2; i < m; ++i) fact *= i;
  for (int k = 0; k <= m; ++k) {
    const long double t = static_cast<long double>(x) + m / 2.0L - k;
    if (t > 0) s += ((k % 2) ? -1.0L : 1.0L) * binom * std::pow(t, m - 1);
    binom = binom * (m - k) / (k + 1);
  }
  return static_cast<double>(s / fact);
}

/// B_m at an integer point for even m, exact up to the final division.
inline double bspline_even_at_integer(int m, long x) {
  __int128 s = 0, binom = 1;
  long double fact = 1.0L;
  for (int i = 2; i < m; ++i) fact *= i;
  for (int k = 0; k <= m; ++k) {
    const long t = x + m / 2 - k;
    if (t > 0) {
      __int128 p = 1;
      for (int e = 0; e < m - 1; ++e) p *= t;
      s += ((k % 2) ? -1 : 1) * binom * p;
    }
    binom = binom * (m - k) / (k + 1);
  }
  return static_cast<double>(static_cast<long double>(s) / fact);
}

/// psi(x) = sum_n q_n B_m(2x - n - m/2) with the truncated-power spline.
inline double psi_direct(const std::vector<double>& q, int m, double x) {
  double s = 0.0;
  for (std::size_t n = 0; n < q.size(); ++n) s += q[n] * bspline_truncated_power(m, 2.0 * x - static_cast<double>(n) - m / 2.0);
  return s;
}

/// 2^{j/2} sum_l psi(2^j (x + l) - k) over a generous window of l.
inline double periodized_window(const hwr::WaveletBasis& b, int j, std::int64_t k, double x) {
  if (j < 0) return 1.0;
  const double P = std::ldexp(1.0, j);
  const double S = b.support();
  const auto lo = static_cast<std::int64_t>(std::floor(k / P - x)) - 1;
  const auto hi = static_cast<std::int64_t>(std::ceil((k + S) / P - x)) + 1;
  double s = 0.0;
  for (std::int64_t l = lo; l <= hi; ++l) s += b.psi()(P * (x + static_cast<double>(l)) - static_cast<double>(k));
  return std::pow(2.0, 0.5 * j) * s;
}

/// Dense design matrix entry by entry from periodized_eval.
inline Eigen::MatrixXd dense_design(const hwr::WaveletBasis& b, const hwr::HyperbolicIndexSet& idx, const hwr::SampleSet& X) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(X.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < X.size(); ++r) {
    const auto x = X.node(r);
    for (std::uint64_t c = 0; c < idx.size(); ++c) {
      const auto& blk = idx.blocks()[idx.block_of_column(c)];
      const auto k = idx.translation_of_column(c);
      double v = 1.0;
      for (int i = 0; i < idx.dim(); ++i)
        v *= hwr::periodized_eval(b, blk.level[static_cast<std::size_t>(i)], static_cast<std::int64_t>(k[static_cast<std::size_t>(i)]), x[static_cast<std::size_t>(i)]);
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return A;
}

inline Eigen::MatrixXd to_dense(const hwr::DesignMatrix& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(A.cols()));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (auto p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p)
      D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(A.col_idx()[p])) += A.values()[p];
  return D;
}

/// Explicit circulant matrix from its first row.
inline Eigen::MatrixXd circulant(std::span<const double> lam) {
  const auto P = static_cast<Eigen::Index>(lam.size());
  Eigen::MatrixXd C(P, P);
  for (Eigen::Index r = 0; r < P; ++r)
    for (Eigen::Index c = 0; c < P; ++c) C(r, c) = lam[static_cast<std::size_t>(((c - r) % P + P) % P)];
  return C;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

inline std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
inline Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Integral over [a, b] by `panels` panels of an n-point Gauss rule.
template <class F>
double integrate(F&& f, double a, double b, int panels, int points) {
  const auto g = hwr::gauss_legendre(points);
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += 0.5 * h * g.weights[i] * f(lo + 0.5 * h * (g.nodes[i] + 1.0));
  }
  return s;
}

}  // namespace oracle
