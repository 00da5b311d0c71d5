#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hwr/design_matrix.hpp"
#include "hwr/index_set.hpp"
#include "hwr/model.hpp"
#include "hwr/pipeline.hpp"

namespace hwr {

struct TestFunction {
  std::string name;
  int dim = 0;
  std::function<double(std::span<const double>)> eval;
  /// Nonzero analytic indices; every other subset has index zero. Empty when unknown.
  std::vector<std::pair<Subset, double>> analytic_gsi;
  /// Fourier coefficient c_k = int f(x) exp(-2 pi i k.x) dx when known in closed form (real here).
  std::function<double(std::span<const std::int64_t>)> fourier;
  std::optional<double> l2_norm;
  double smoothness = 0.0;
  std::string space;
  std::vector<std::pair<std::string, std::string>> metadata;

  double operator()(std::span<const double> x) const { return eval(x); }
  std::vector<double> evaluate_many(std::span<const double> nodes) const;
  /// Analytic index of u (0 for subsets not listed).
  double gsi(Subset u) const;
};

/// kink (alias kink_d), bspline3_prod, ishigami_variant, pyramid. `d` is used by kink and
/// bspline3_prod (0 selects their defaults 1 and 3); the others have a fixed dimension.
TestFunction builtin(std::string_view name, int d = 0);
std::vector<std::string> builtin_names();

/// Samples of f at uniform nodes from the sampling substream of `seed`.
SampleSet sample_function(const TestFunction& f, std::size_t M, std::uint64_t seed);

/// Root mean squared error on M_test fresh nodes from the testing substream.
double rmse(const WaveletModel& model, const TestFunction& f, std::size_t M_test, std::uint64_t seed,
            const ExecPolicy& p = {});

struct ConvergenceRow {
  int n = 0;
  std::uint64_t N = 0;
  std::size_t M = 0;
  double rmse = 0.0;
  double seconds = 0.0;
  std::uint64_t seed = 0;
};

struct StudyOptions {
  double oversample = 2.0;        // M = ceil(c N ln N)
  std::optional<std::size_t> M;   // fixed sample count instead of the rule
  std::size_t M_test = 100000;
  SolveOptions solver;
  ExecPolicy exec;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // least squares in log2(rmse) over the upper half of the n range
};

ConvergenceStudy convergence_study(const TestFunction& f, int m, int n_min, int n_max, std::uint64_t seed,
                                   const StudyOptions& opts = {});
/// Least-squares slope of log2(rmse) against n over the last ceil(rows/2) rows (at least two).
double upper_half_slope(std::span<const ConvergenceRow> rows);
void write_study_csv(std::ostream& os, std::span<const ConvergenceRow> rows);

struct SpectralDiagnostics {
  double R_n = 0.0;      // max squared row norm over the nodes
  double min_eig = 0.0;  // of (1/M) A^T A
  double max_eig = 0.0;
  int iterations = 0;
};

SpectralDiagnostics spectral_diagnostics(const WaveletBasis& basis, std::shared_ptr<const HyperbolicIndexSet> idx,
                                         const SampleSet& X, const ExecPolicy& p = {});
SpectralDiagnostics spectral_diagnostics(const DesignMatrix& A, const ExecPolicy& p = {});

}  // namespace hwr
