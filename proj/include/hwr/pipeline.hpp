#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hwr/anova.hpp"
#include "hwr/design_matrix.hpp"
#include "hwr/lsqr.hpp"
#include "hwr/model.hpp"

namespace hwr {

struct FitConfig {
  int m = 2;
  int d = 0;                 // 0: take it from the samples
  std::optional<int> n;      // stage-1 level; required for fit_hyperbolic, auto for fit_anova
  int nu = 1;
  double epsilon = 0.01;
  std::optional<int> n2;     // stage-2 level, auto when unset
  std::uint64_t seed = 0;
  double oversample = 2.0;   // c in M >= c N ln N; only used for warnings here
  SolveOptions solver;
  ExecPolicy exec;

  void validate(int sample_dim) const;
};

struct StageResult {
  WaveletModel model;
  SolveReport solve;
  std::optional<AnovaReport> anova;
  SubsetFamily family;  // supports allowed in this stage
  int level = 0;
  std::uint64_t columns = 0;
  std::uint64_t nonzeros = 0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct FitResult {
  WaveletModel model;   // final stage
  SolveReport report;   // final stage
  std::optional<AnovaReport> anova;    // stage-1 report for fit_anova
  std::optional<SubsetFamily> active;  // selected U for fit_anova
  std::vector<StageResult> stages;
  std::vector<std::string> warnings;
};

/// M i.i.d. uniform nodes on [-1/2, 1/2)^d from the named substream of `seed`.
SampleSet sample_uniform(int d, std::size_t M, std::uint64_t seed, std::string_view stream = "sampling");

/// Largest n with M > N ln N for J_n^U (natural log, strict). Throws Underdetermined if even n = 0 fails.
int auto_level(int d, const SubsetFamily& U, std::size_t M);

/// Assemble + LSQR on a given index set.
StageResult fit_index_set(const SampleSet& X, std::shared_ptr<const WaveletBasis> basis,
                          std::shared_ptr<const HyperbolicIndexSet> idx, const FitConfig& cfg,
                          std::vector<std::string>& warnings);

/// Hyperbolic wavelet regression on J_n.
FitResult fit_hyperbolic(const SampleSet& X, const FitConfig& cfg);

/// Two-stage ANOVA regression: fit on U_nu, select U by the indices, refit on J_{n2}^U.
FitResult fit_anova(const SampleSet& X, const FitConfig& cfg);

}  // namespace hwr
