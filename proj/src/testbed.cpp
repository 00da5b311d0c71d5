#include "hwr/testbed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "hwr/errors.hpp"
#include "hwr/rng.hpp"
#include "hwr/wavelet.hpp"

namespace hwr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Indices of a product of identical univariate factors with mean mu and second moment s2.
std::vector<std::pair<Subset, double>> product_gsi(int d, double mu, double s2) {
  std::vector<std::pair<Subset, double>> out;
  if (d > 16) return out;
  const double var1 = s2 - mu * mu;
  const double total = std::pow(s2, d) - std::pow(mu * mu, d);
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << d); ++bits) {
    const Subset u(bits);
    out.emplace_back(u, std::pow(var1, u.size()) * std::pow(mu * mu, d - u.size()) / total);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return subset_order(a.first, b.first); });
  return out;
}

TestFunction make_kink(int d) {
  const double scale = std::sqrt(98415.0 / 32.0);
  TestFunction f;
  f.name = "kink";
  f.dim = d;
  f.eval = [scale](std::span<const double> x) {
    double p = 1.0;
    for (double xi : x) p *= scale * std::max(1.0 / 9.0 - xi * xi, 0.0);
    return p;
  };
  f.fourier = [](std::span<const std::int64_t> k) {
    double p = 1.0;
    for (std::int64_t ki : k) {
      if (ki == 0) {
        p *= std::sqrt(7.5);
      } else {
        const double a = kTwoPi * static_cast<double>(ki) / 3.0;
        const double kk = static_cast<double>(ki);
        p *= 27.0 / 8.0 * std::sqrt(7.5) * (3.0 * std::sin(a) - 2.0 * kk * std::numbers::pi * std::cos(a)) /
             (std::pow(std::numbers::pi, 3) * kk * kk * kk);
      }
    }
    return p;
  };
  // per coordinate: mean sqrt(15/2), second moment 27/2
  f.analytic_gsi = product_gsi(d, std::sqrt(7.5), 13.5);
  f.l2_norm = std::pow(std::sqrt(13.5), d);
  f.smoothness = 1.5;
  f.space = "B^{3/2}_{2,inf} (dominating mixed)";
  f.metadata = {{"scale", "sqrt(98415/32)"}};
  return f;
}

TestFunction make_bspline3_prod(int d) {
  const double shift = 1.0 / std::numbers::pi;
  TestFunction f;
  f.name = "bspline3_prod";
  f.dim = d;
  f.eval = [shift](std::span<const double> x) {
    double p = 1.0;
    for (double xi : x) p *= bspline_eval(3, 4.0 * xi - shift);
    return p;
  };
  // mean 1/4, second moment B_6(0)/4
  f.analytic_gsi = product_gsi(d, 0.25, bspline_eval(6, 0.0) / 4.0);
  f.l2_norm = std::pow(std::sqrt(bspline_eval(6, 0.0) / 4.0), d);
  f.smoothness = 2.5;
  f.space = "H^{5/2-eps} (dominating mixed)";
  return f;
}

TestFunction make_ishigami() {
  const double E4 = std::pow(kTwoPi, 4) / 80.0;
  const double E8 = std::pow(kTwoPi, 8) / 2304.0;
  const double v1 = std::pow(1.0 + 0.1 * E4, 2) / 2.0;
  const double v2 = 49.0 / 8.0;
  const double v13 = 0.01 * (E8 - E4 * E4) / 2.0;
  const double vg = 1e6 * std::pow(bspline_eval(12, 0.0) / 16.0 - 1.0 / 256.0, 3);
  const double total = v1 + v2 + v13 + vg;
  const double c = 1.0 / std::sqrt(total);

  TestFunction f;
  f.name = "ishigami_variant";
  f.dim = 8;
  f.eval = [c](std::span<const double> x) {
    const double s1 = std::sin(kTwoPi * x[0]);
    const double s2 = std::sin(kTwoPi * x[1]);
    const double t3 = std::pow(kTwoPi * x[2], 4);
    double g = 1.0;
    for (int i = 5; i < 8; ++i) g *= bspline_eval(6, 16.0 * x[static_cast<std::size_t>(i)]) - 1.0 / 16.0;
    return c * (-3.5 + s1 + 7.0 * s2 * s2 + 0.1 * t3 * s1 + 1e3 * g);
  };
  f.analytic_gsi = {{Subset::of({0}), v1 / total},
                    {Subset::of({1}), v2 / total},
                    {Subset::of({0, 2}), v13 / total},
                    {Subset::of({5, 6, 7}), vg / total}};
  f.l2_norm = 1.0;
  f.smoothness = 5.5;
  f.space = "H^{11/2-eps} (dominating mixed)";
  f.metadata = {{"normalization_constant", format17(c)}, {"normalization_method", "closed-form variance"}};
  return f;
}

TestFunction make_pyramid() {
  const double scale = 2.0 * std::sqrt(6.0);
  TestFunction f;
  f.name = "pyramid";
  f.dim = 6;
  f.eval = [scale](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      s += 1.0 / 3.0 - std::max(std::abs(x[static_cast<std::size_t>(2 * i)]), std::abs(x[static_cast<std::size_t>(2 * i + 1)]));
    return scale * s;
  };
  for (int i = 0; i < 6; ++i) f.analytic_gsi.emplace_back(Subset::of({i}), 2.0 / 15.0);
  for (int i = 0; i < 3; ++i) f.analytic_gsi.emplace_back(Subset::of({2 * i, 2 * i + 1}), 1.0 / 15.0);
  f.l2_norm = 1.0;
  f.smoothness = 1.5;
  f.space = "H^{3/2-eps} (dominating mixed)";
  return f;
}

}  // namespace

std::vector<double> TestFunction::evaluate_many(std::span<const double> nodes) const {
  const auto d = static_cast<std::size_t>(dim);
  if (nodes.size() % d != 0) throw Error(Errc::LengthMismatch, "node storage is not a multiple of d");
  const auto count = static_cast<std::ptrdiff_t>(nodes.size() / d);
  std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = eval(nodes.subspan(static_cast<std::size_t>(i) * d, d));
  return out;
}

double TestFunction::gsi(Subset u) const {
  for (const auto& [s, v] : analytic_gsi)
    if (s == u) return v;
  return 0.0;
}

std::vector<std::string> builtin_names() { return {"kink", "bspline3_prod", "ishigami_variant", "pyramid"}; }

TestFunction builtin(std::string_view name, int d) {
  if (d < 0 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "dimension must lie in [1, 64]");
  auto fixed = [&](int dim) {
    if (d != 0 && d != dim)
      throw Error(Errc::DimensionMismatch, std::string(name) + " is defined for d = " + std::to_string(dim));
  };
  if (name == "kink" || name == "kink_d") return make_kink(d == 0 ? 1 : d);
  if (name == "bspline3_prod") return make_bspline3_prod(d == 0 ? 3 : d);
  if (name == "ishigami_variant" || name == "ishigami") {
    fixed(8);
    return make_ishigami();
  }
  if (name == "pyramid") {
    fixed(6);
    return make_pyramid();
  }
  throw Error(Errc::UnknownName, "unknown test function '" + std::string(name) + "'");
}

SampleSet sample_function(const TestFunction& f, std::size_t M, std::uint64_t seed) {
  SampleSet X = sample_uniform(f.dim, M, seed, "sampling");
  X.values = f.evaluate_many(X.nodes);
  return X;
}

double rmse(const WaveletModel& model, const TestFunction& f, std::size_t M_test, std::uint64_t seed,
            const ExecPolicy& p) {
  if (M_test < 1) throw Error(Errc::InvalidArgument, "M_test must be positive");
  if (model.dim() != f.dim) throw Error(Errc::DimensionMismatch, "model and function dimensions differ");
  const SampleSet T = sample_uniform(f.dim, M_test, seed, "testing");
  const auto fx = f.evaluate_many(T.nodes);
  const auto gx = model.evaluate_many(T.nodes, p);
  double s = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) s += (fx[i] - gx[i]) * (fx[i] - gx[i]);
  return std::sqrt(s / static_cast<double>(fx.size()));
}

double upper_half_slope(std::span<const ConvergenceRow> rows) {
  if (rows.size() < 2) throw Error(Errc::InvalidArgument, "slope needs at least two rows");
  const std::size_t take = std::max<std::size_t>(2, (rows.size() + 1) / 2);
  const auto tail = rows.subspan(rows.size() - take);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : tail) {
    const double x = r.n, y = std::log2(r.rmse);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(tail.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

ConvergenceStudy convergence_study(const TestFunction& f, int m, int n_min, int n_max, std::uint64_t seed,
                                   const StudyOptions& opts) {
  if (n_min < 0 || n_max < n_min) throw Error(Errc::InvalidArgument, "n range must be nondecreasing and nonnegative");
  const int count = n_max - n_min + 1;
  ConvergenceStudy study;
  study.rows.resize(static_cast<std::size_t>(count));

  // one fit per level; with several threads the levels run concurrently and each fit is serial
  const int threads = std::min(resolve_threads(opts.exec), count);
  ExecPolicy inner = opts.exec;
  if (threads > 1) inner = ExecPolicy{1, opts.exec.deterministic};
  std::vector<std::string> errors(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (int i = count - 1; i >= 0; --i) {
    try {
      const int n = n_min + i;
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t N = count_columns(f.dim, n, SubsetFamily::power_set(f.dim));
      const std::size_t M = opts.M ? *opts.M : static_cast<std::size_t>(log_oversampling(N, opts.oversample));
      const SampleSet X = sample_function(f, M, seed);
      FitConfig cfg;
      cfg.m = m;
      cfg.n = n;
      cfg.seed = seed;
      cfg.solver = opts.solver;
      cfg.exec = inner;
      const FitResult fit = fit_hyperbolic(X, cfg);
      const double e = rmse(fit.model, f, opts.M_test, seed, inner);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      study.rows[static_cast<std::size_t>(i)] = {n, N, M, e, secs, seed};
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(i)] = ex.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw Error(Errc::InvalidArgument, "fit at n = " + std::to_string(n_min + static_cast<int>(i)) + " failed: " + errors[i]);
  if (count >= 2) study.slope = upper_half_slope(study.rows);
  return study;
}

void write_study_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  os << "n,N,M,rmse,seconds,seed\n";
  for (const auto& r : rows)
    os << r.n << ',' << r.N << ',' << r.M << ',' << format17(r.rmse) << ',' << format17(r.seconds) << ',' << r.seed << '\n';
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (a, b) below x (Sturm count).
int sturm_count(const std::vector<double>& a, const std::vector<double>& b, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
    q = a[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> tridiagonal_extremes(const std::vector<double>& a, const std::vector<double>& b) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < a.size() ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }
  const int n = static_cast<int>(a.size());
  auto bisect = [&](int target) {  // smallest x with count(x) > target
    double l = lo, h = hi;
    for (int it = 0; it < 200 && h - l > 1e-16 * std::max(std::abs(l), std::abs(h)); ++it) {
      const double mid = 0.5 * (l + h);
      if (sturm_count(a, b, mid) > target) h = mid;
      else l = mid;
    }
    return 0.5 * (l + h);
  };
  return {bisect(0), bisect(n - 1)};
}

}  // namespace

SpectralDiagnostics spectral_diagnostics(const DesignMatrix& A, const ExecPolicy& p) {
  SpectralDiagnostics out;
  for (double r : A.row_norms_squared()) out.R_n = std::max(out.R_n, r);

  // Lanczos with full reorthogonalization on G = A^T A / M.
  const auto N = static_cast<std::size_t>(A.cols());
  const double invM = 1.0 / static_cast<double>(A.rows());
  const std::size_t max_steps = std::min<std::size_t>(N, 400);
  std::vector<std::vector<double>> Q;
  std::vector<double> alpha, beta;
  std::vector<double> q(N), w(N), tmp(A.rows());
  const CounterRng rng = CounterRng::substream(0, "lanczos");
  double nrm = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    q[i] = rng.uniform(i) - 0.5;
    nrm += q[i] * q[i];
  }
  for (double& v : q) v /= std::sqrt(nrm);
  double prev_lo = INFINITY, prev_hi = -INFINITY;
  int stable = 0;
  for (std::size_t k = 0; k < max_steps; ++k) {
    Q.push_back(q);
    A.apply(q, tmp, p);
    A.apply_transpose(tmp, w, p);
    for (double& v : w) v *= invM;
    double a = 0.0;
    for (std::size_t i = 0; i < N; ++i) a += q[i] * w[i];
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : Q) {
        double c = 0.0;
        for (std::size_t i = 0; i < N; ++i) c += v[i] * w[i];
        for (std::size_t i = 0; i < N; ++i) w[i] -= c * v[i];
      }
    double b = 0.0;
    for (double v : w) b += v * v;
    b = std::sqrt(b);
    out.iterations = static_cast<int>(k + 1);
    const auto [lo, hi] = tridiagonal_extremes(alpha, beta);
    out.min_eig = lo;
    out.max_eig = hi;
    if (b <= 1e-13 * std::max(hi, 1e-300)) break;  // invariant subspace reached
    const bool settled = std::abs(lo - prev_lo) <= 1e-13 * std::abs(lo) && std::abs(hi - prev_hi) <= 1e-13 * std::abs(hi);
    stable = settled ? stable + 1 : 0;
    if (stable >= 3) break;
    prev_lo = lo;
    prev_hi = hi;
    beta.push_back(b);
    for (std::size_t i = 0; i < N; ++i) q[i] = w[i] / b;
  }
  return out;
}

SpectralDiagnostics spectral_diagnostics(const WaveletBasis& basis, std::shared_ptr<const HyperbolicIndexSet> idx,
                                         const SampleSet& X, const ExecPolicy& p) {
  const DesignMatrix A = assemble(basis, std::move(idx), X, p);
  return spectral_diagnostics(A, p);
}

}  // namespace hwr
