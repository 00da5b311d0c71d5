#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hwr/index_set.hpp"
#include "hwr/model.hpp"
#include "hwr/parallel.hpp"

namespace hwr {

/// Wrapped autocorrelations lambda_j for levels -1 .. max_level.
class GramBlockTable {
 public:
  GramBlockTable(const WaveletBasis& basis, int max_level);

  int max_level() const { return static_cast<int>(lambda_.size()) - 2; }
  /// lambda_{j,k}, k = 0 .. 2^max(j,0) - 1.
  std::span<const double> lambda(int j) const;
  /// Nonzero entries of lambda_j as (k, value), k ascending.
  std::span<const std::pair<std::uint32_t, double>> stencil(int j) const;

  /// a^T (circ(lambda_{j_1}) (x) ... (x) circ(lambda_{j_d})) a for one block, coefficients row-major.
  double quadratic_form(std::span<const int> level, std::span<const double> a) const;

 private:
  std::vector<std::vector<double>> lambda_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> stencil_;
};

GramBlockTable gram_blocks(const WaveletBasis& basis, int max_level);

struct AnovaTerm {
  Subset u;
  double variance = 0.0;
  double rho = 0.0;
};

struct AnovaReport {
  double grand_mean = 0.0;
  double total_variance = 0.0;
  bool has_indices = true;       // false when the total variance is zero
  std::vector<AnovaTerm> terms;  // u != {}, report order

  const AnovaTerm* find(Subset u) const;
  /// Terms sorted by decreasing rho; ties keep report order.
  std::vector<AnovaTerm> ranked() const;
};

/// sigma^2(g_u) summed over the blocks whose support is exactly u.
double term_variance(const WaveletModel& model, const GramBlockTable& grams, Subset u);

/// Variances and global sensitivity indices of every subset realized by the
/// index set (and every member of its family, reported with zero variance).
AnovaReport sensitivity_indices(const WaveletModel& model, const GramBlockTable& grams, const ExecPolicy& p = {});
/// Same decomposition without indices; never throws ZeroVariance.
AnovaReport variance_report(const WaveletModel& model, const GramBlockTable& grams, const ExecPolicy& p = {});

/// a^T Lambda a over all blocks, including the constant one.
double gram_quadratic_form(const WaveletModel& model, const GramBlockTable& grams);

/// g_u on the |u|-dimensional torus.
WaveletModel extract_term(const WaveletModel& model, Subset u);

/// {} together with every u whose rho exceeds epsilon.
SubsetFamily select_active(const AnovaReport& report, double epsilon);

}  // namespace hwr
