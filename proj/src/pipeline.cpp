#include "hwr/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "hwr/errors.hpp"
#include "hwr/rng.hpp"

namespace hwr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void FitConfig::validate(int sample_dim) const {
  (void)SplineOrder{m};
  if (d != 0 && d != sample_dim)
    throw Error(Errc::DimensionMismatch, "config dimension " + std::to_string(d) + " but samples have " + std::to_string(sample_dim));
  if (n && *n < 0) throw Error(Errc::InvalidArgument, "level n must be nonnegative");
  if (n2 && *n2 < 0) throw Error(Errc::InvalidArgument, "level n2 must be nonnegative");
  if (nu < 1 || nu > sample_dim) throw Error(Errc::InvalidArgument, "nu must lie in [1, d]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::InvalidArgument, "epsilon must lie in (0, 1)");
  if (!(oversample > 0.0)) throw Error(Errc::InvalidArgument, "oversampling constant must be positive");
  solver.validate();
}

SampleSet sample_uniform(int d, std::size_t M, std::uint64_t seed, std::string_view stream) {
  if (d < 1 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "dimension must lie in [1, 64]");
  if (M < 1) throw Error(Errc::InvalidArgument, "need at least one sample");
  const CounterRng rng = CounterRng::substream(seed, stream);
  SampleSet X;
  X.d = d;
  X.nodes.resize(M * static_cast<std::size_t>(d));
  const auto total = static_cast<std::ptrdiff_t>(X.nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) X.nodes[static_cast<std::size_t>(i)] = rng.uniform(static_cast<std::uint64_t>(i)) - 0.5;
  return X;
}

int auto_level(int d, const SubsetFamily& U, std::size_t M) {
  const double Md = static_cast<double>(M);
  int best = -1;
  for (int n = 0; n < 62; ++n) {
    const double N = static_cast<double>(count_columns(d, n, U));
    if (!(Md > N * std::log(N))) break;
    best = n;
    if (U.size() == 1) break;  // only the constant: the level is irrelevant
  }
  if (best < 0) throw Error(Errc::Underdetermined, "no level satisfies M > N ln N with M = " + std::to_string(M));
  return best;
}

StageResult fit_index_set(const SampleSet& X, std::shared_ptr<const WaveletBasis> basis,
                          std::shared_ptr<const HyperbolicIndexSet> idx, const FitConfig& cfg,
                          std::vector<std::string>& warnings) {
  const std::size_t M = X.size();
  const std::uint64_t N = idx->size();
  if (M < N)
    throw Error(Errc::Underdetermined, std::to_string(M) + " samples for " + std::to_string(N) + " columns");
  if (N >= 2 && static_cast<double>(M) < 2.0 * static_cast<double>(N) * std::log(static_cast<double>(N)))
    warnings.push_back("OversamplingWarning: M = " + std::to_string(M) + " < 2 N ln N for N = " + std::to_string(N));

  auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  std::vector<double> a;
  std::uint64_t nnz = 0;
  double t_asm = 0.0;
  {
    const DesignMatrix A = assemble(*basis, idx, X, cfg.exec);
    nnz = A.nnz();
    t_asm = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    a = lsqr(DesignOperator{&A, cfg.exec}, X.values, cfg.solver, rep);
  }  // the matrix is released here, before any later stage assembles its own
  const double t_solve = seconds_since(t0);
  if (rep.stop == StopReason::MaxIter)
    warnings.push_back("MaxIterReached: LSQR stopped after " + std::to_string(rep.iterations) + " iterations");
  if (rep.stop == StopReason::Breakdown) warnings.push_back("LSQR reported a numerical breakdown");

  StageResult s{WaveletModel(std::move(basis), idx, std::move(a)), rep, std::nullopt,
                idx->family() ? *idx->family() : idx->realized_supports(), idx->max_level(), N, nnz, t_asm, t_solve};
  return s;
}

FitResult fit_hyperbolic(const SampleSet& X, const FitConfig& cfg) {
  X.validate(true);
  cfg.validate(X.d);
  if (!cfg.n) throw Error(Errc::InvalidArgument, "fit_hyperbolic needs a level n");
  auto basis = std::make_shared<const WaveletBasis>(SplineOrder{cfg.m});
  auto idx = std::make_shared<const HyperbolicIndexSet>(build_hyperbolic(X.d, *cfg.n));
  std::vector<std::string> warnings;
  StageResult s = fit_index_set(X, basis, idx, cfg, warnings);
  FitResult r{s.model, s.solve, std::nullopt, std::nullopt, {}, std::move(warnings)};
  r.stages.push_back(std::move(s));
  return r;
}

FitResult fit_anova(const SampleSet& X, const FitConfig& cfg) {
  X.validate(true);
  cfg.validate(X.d);
  const int d = X.d;
  auto basis = std::make_shared<const WaveletBasis>(SplineOrder{cfg.m});
  const SubsetFamily U_nu = SubsetFamily::up_to_order(d, cfg.nu);
  std::vector<std::string> warnings;

  // stage 1
  const int n1 = cfg.n ? *cfg.n : auto_level(d, U_nu, X.size());
  auto idx1 = std::make_shared<const HyperbolicIndexSet>(build_restricted(d, n1, U_nu));
  StageResult s1 = fit_index_set(X, basis, idx1, cfg, warnings);
  const GramBlockTable g1(*basis, n1);
  try {
    s1.anova = sensitivity_indices(s1.model, g1, cfg.exec);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVariance) throw;
    s1.anova = variance_report(s1.model, g1, cfg.exec);
  }
  const SubsetFamily U = s1.anova->has_indices ? select_active(*s1.anova, cfg.epsilon) : SubsetFamily({Subset{}});

  FitResult r{s1.model, s1.solve, s1.anova, U, {}, {}};
  r.stages.push_back(std::move(s1));

  if (U.size() == 1) {
    // only the constant survives: return the mean as a constant model
    warnings.push_back("DegenerateSelection: no subset exceeds epsilon; returning a constant model");
    double mean = 0.0;
    for (double y : X.values) mean += y;
    mean /= static_cast<double>(X.size());
    auto idx0 = std::make_shared<const HyperbolicIndexSet>(build_restricted(d, 0, U));
    r.model = WaveletModel(basis, idx0, {mean});
    r.warnings = std::move(warnings);
    return r;
  }

  // stage 2 reuses the same samples
  const int n2 = cfg.n2 ? *cfg.n2 : auto_level(d, U, X.size());
  auto idx2 = std::make_shared<const HyperbolicIndexSet>(build_restricted(d, n2, U));
  StageResult s2 = fit_index_set(X, basis, idx2, cfg, warnings);
  const GramBlockTable g2(*basis, n2);
  try {
    s2.anova = sensitivity_indices(s2.model, g2, cfg.exec);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVariance) throw;
    s2.anova = variance_report(s2.model, g2, cfg.exec);
  }
  r.model = s2.model;
  r.report = s2.solve;
  r.stages.push_back(std::move(s2));
  r.warnings = std::move(warnings);
  return r;
}

}  // namespace hwr
