#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hwr/index_set.hpp"
#include "hwr/parallel.hpp"
#include "hwr/wavelet.hpp"

namespace hwr {

/// S(x) = sum_{j,k} a_{j,k} psi^per_{j,k}(x) over an index set.
class WaveletModel {
 public:
  WaveletModel(std::shared_ptr<const WaveletBasis> basis, std::shared_ptr<const HyperbolicIndexSet> idx,
               std::vector<double> coefficients);

  const WaveletBasis& basis() const { return *basis_; }
  const std::shared_ptr<const WaveletBasis>& basis_ptr() const { return basis_; }
  const HyperbolicIndexSet& index_set() const { return *idx_; }
  const std::shared_ptr<const HyperbolicIndexSet>& index_set_ptr() const { return idx_; }
  int dim() const { return idx_->dim(); }
  std::span<const double> coefficients() const { return coeffs_; }
  std::span<const double> block_coefficients(std::size_t block) const;

  double evaluate(std::span<const double> x) const;
  /// Row-major nodes, count = nodes.size() / dim().
  std::vector<double> evaluate_many(std::span<const double> nodes, const ExecPolicy& p = {}) const;

  /// Coefficient of the constant column (zero if the index set has no (-1,...,-1) block).
  double constant_term() const;

 private:
  std::shared_ptr<const WaveletBasis> basis_;
  std::shared_ptr<const HyperbolicIndexSet> idx_;
  std::vector<double> coeffs_;
};

}  // namespace hwr
