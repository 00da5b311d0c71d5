#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hwr/errors.hpp"

namespace hwr {

template <class Op>
concept LinearOperator = requires(const Op& A, std::span<const double> x, std::span<double> y) {
  { A.rows() } -> std::convertible_to<std::size_t>;
  { A.cols() } -> std::convertible_to<std::size_t>;
  A.apply(x, y);            // y = A x
  A.apply_transpose(x, y);  // y = A^T x
};

struct SolveOptions {
  double atol = 1e-8;
  double btol = 1e-8;
  int max_iter = 200;
  double damp = 0.0;

  void validate() const;
};

enum class StopReason { Converged, MaxIter, Breakdown };
const char* to_string(StopReason r);

struct SolveReport {
  int iterations = 0;
  double residual_norm = 0.0;         // ||A a - y||, recomputed at exit
  double normal_residual_norm = 0.0;  // ||A^T (A a - y)||, recomputed at exit
  StopReason stop = StopReason::MaxIter;
  std::vector<double> residual_history;  // LSQR's running estimate of ||r||, one per iteration
};

/// Called after every iteration with the current iterate.
using LsqrObserver = std::function<void(int iteration, std::span<const double> x)>;

namespace detail {
// Serial reductions keep the bidiagonalization scalars reproducible.
inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace detail

/// Paige-Saunders LSQR for min ||A x - b||^2 + damp^2 ||x||^2.
template <LinearOperator Op>
std::vector<double> lsqr(const Op& A, std::span<const double> b, const SolveOptions& opts, SolveReport& report,
                         const LsqrObserver& observer = {}) {
  opts.validate();
  const std::size_t m = A.rows(), n = A.cols();
  if (b.size() != m) throw Error(Errc::LengthMismatch, "right-hand side length does not match the operator");
  for (double v : b)
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "right-hand side contains non-finite values");

  report = SolveReport{};
  std::vector<double> x(n, 0.0), u(b.begin(), b.end()), v(n), w(n), tmp_m(m), tmp_n(n);

  double beta = detail::norm2(u);
  const double bnorm = beta;
  if (beta > 0.0)
    for (double& e : u) e /= beta;
  A.apply_transpose(u, v);
  double alpha = detail::norm2(v);
  if (alpha > 0.0)
    for (double& e : v) e /= alpha;
  w = v;

  double rhobar = alpha, phibar = beta;
  double anorm = 0.0, ddnorm = 0.0, res2 = 0.0, xxnorm = 0.0, z = 0.0;
  double cs2 = -1.0, sn2 = 0.0;
  const double damp = opts.damp;
  report.stop = StopReason::MaxIter;

  if (alpha * beta == 0.0) {
    report.stop = StopReason::Converged;  // x = 0 already satisfies the normal equations
  } else {
    for (int itn = 1; itn <= opts.max_iter; ++itn) {
      // bidiagonalization step
      A.apply(v, tmp_m);
      for (std::size_t i = 0; i < m; ++i) u[i] = tmp_m[i] - alpha * u[i];
      beta = detail::norm2(u);
      if (beta > 0.0) {
        for (double& e : u) e /= beta;
        anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta + damp * damp);
        A.apply_transpose(u, tmp_n);
        for (std::size_t i = 0; i < n; ++i) v[i] = tmp_n[i] - beta * v[i];
        alpha = detail::norm2(v);
        if (alpha > 0.0)
          for (double& e : v) e /= alpha;
      } else {
        anorm = std::sqrt(anorm * anorm + alpha * alpha + damp * damp);
      }

      // plane rotations
      const double rhobar1 = std::hypot(rhobar, damp);
      const double cs1 = rhobar / rhobar1, sn1 = damp / rhobar1;
      const double psi = sn1 * phibar;
      phibar = cs1 * phibar;
      const double rho = std::hypot(rhobar1, beta);
      if (!(rho > 0.0)) {
        report.stop = StopReason::Breakdown;
        report.iterations = itn;
        break;
      }
      const double cs = rhobar1 / rho, sn = beta / rho;
      const double theta = sn * alpha;
      rhobar = -cs * alpha;
      const double phi = cs * phibar;
      phibar = sn * phibar;
      const double tau = sn * phi;

      const double t1 = phi / rho, t2 = -theta / rho;
      double dk2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double wi = w[i];
        dk2 += (wi / rho) * (wi / rho);
        x[i] += t1 * wi;
        w[i] = v[i] + t2 * wi;
      }
      ddnorm += dk2;

      // estimate ||x||
      const double delta = sn2 * rho;
      const double gambar = -cs2 * rho;
      const double rhs = phi - delta * z;
      const double zbar = rhs / gambar;
      const double xnorm = std::sqrt(xxnorm + zbar * zbar);
      const double gamma = std::hypot(gambar, theta);
      cs2 = gambar / gamma;
      sn2 = theta / gamma;
      z = rhs / gamma;
      xxnorm += z * z;

      res2 += psi * psi;
      const double rnorm = std::sqrt(phibar * phibar + res2);
      const double arnorm = alpha * std::abs(tau);
      report.residual_history.push_back(rnorm);
      report.iterations = itn;
      if (observer) observer(itn, x);

      const double test1 = rnorm / bnorm;
      const double test2 = (anorm * rnorm > 0.0) ? arnorm / (anorm * rnorm) : 0.0;
      const double rtol = opts.btol + opts.atol * anorm * xnorm / bnorm;
      if (!std::isfinite(rnorm) || !std::isfinite(xnorm)) {
        report.stop = StopReason::Breakdown;
        break;
      }
      if (test2 <= opts.atol || test1 <= rtol || beta == 0.0 || alpha == 0.0) {
        report.stop = StopReason::Converged;
        break;
      }
      // machine-precision limits
      if (1.0 + test2 <= 1.0 || 1.0 + test1 / (1.0 + anorm * xnorm / bnorm) <= 1.0) {
        report.stop = StopReason::Converged;
        break;
      }
    }
  }

  A.apply(x, tmp_m);
  for (std::size_t i = 0; i < m; ++i) tmp_m[i] -= b[i];
  report.residual_norm = detail::norm2(tmp_m);
  A.apply_transpose(tmp_m, tmp_n);
  report.normal_residual_norm = detail::norm2(tmp_n);
  return x;
}

}  // namespace hwr
