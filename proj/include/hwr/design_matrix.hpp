#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hwr/index_set.hpp"
#include "hwr/parallel.hpp"
#include "hwr/sample_set.hpp"
#include "hwr/wavelet.hpp"

namespace hwr {

/// Compressed row storage of the hyperbolic wavelet matrix.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  DesignMatrix(std::size_t rows, std::uint64_t cols, std::vector<std::uint64_t> row_ptr,
               std::vector<std::uint32_t> col_idx, std::vector<double> values,
               std::shared_ptr<const HyperbolicIndexSet> idx = nullptr);

  std::size_t rows() const { return rows_; }
  std::uint64_t cols() const { return cols_; }
  std::uint64_t nnz() const { return values_.size(); }
  std::span<const std::uint64_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  const std::shared_ptr<const HyperbolicIndexSet>& index_set() const { return idx_; }

  /// y = A a
  void apply(std::span<const double> a, std::span<double> y, const ExecPolicy& p = {}) const;
  /// out = A^T r
  void apply_transpose(std::span<const double> r, std::span<double> out, const ExecPolicy& p = {}) const;

  /// Squared Euclidean norm of each row.
  std::vector<double> row_norms_squared() const;

 private:
  std::size_t rows_ = 0;
  std::uint64_t cols_ = 0;
  std::vector<std::uint64_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
  std::shared_ptr<const HyperbolicIndexSet> idx_;
};

DesignMatrix assemble(const WaveletBasis& basis, std::shared_ptr<const HyperbolicIndexSet> idx, const SampleSet& X,
                      const ExecPolicy& p = {});

std::vector<double> matvec(const DesignMatrix& A, std::span<const double> a, const ExecPolicy& p = {});
std::vector<double> rmatvec(const DesignMatrix& A, std::span<const double> r, const ExecPolicy& p = {});

/// LSQR-facing view of a design matrix bound to an execution policy.
struct DesignOperator {
  const DesignMatrix* A;
  ExecPolicy policy;

  std::size_t rows() const { return A->rows(); }
  std::size_t cols() const { return static_cast<std::size_t>(A->cols()); }
  void apply(std::span<const double> x, std::span<double> y) const { A->apply(x, y, policy); }
  void apply_transpose(std::span<const double> x, std::span<double> y) const { A->apply_transpose(x, y, policy); }
};

}  // namespace hwr
