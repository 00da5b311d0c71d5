#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hwr/index_set.hpp"
#include "hwr/wavelet.hpp"

namespace hwr {

/// Enumerates the nonzero entries psi^per_{j,k}(x) of one design-matrix row.
/// Holds per-point scratch, so use one instance per thread.
class RowEvaluator {
 public:
  RowEvaluator(const WaveletBasis& basis, const HyperbolicIndexSet& idx);

  /// Fills the one-dimensional tables for node x; call before visit/count.
  void load(std::span<const double> x);

  /// Number of entries visit() will produce for the loaded node.
  std::uint64_t count() const;

  /// sink(column, value) for every entry, blocks in column order, k row-major.
  /// Each value is the product of one-dimensional factors taken in coordinate order.
  template <class Sink>
  void visit(Sink&& sink) const;

 private:
  struct Plan {
    std::uint64_t offset;
    std::vector<int> slots;              // table slot per support coordinate
    std::vector<std::uint64_t> strides;  // row-major strides per support coordinate
  };

  int slot(int coord, int level) const { return slot_base_[static_cast<std::size_t>(coord)] + level + 1; }

  const WaveletBasis* basis_;
  const HyperbolicIndexSet* idx_;
  int width_;
  std::vector<Plan> plans_;
  std::vector<int> slot_base_;
  std::vector<int> slot_level_;
  std::vector<int> slot_coord_;
  std::vector<int> counts_;
  std::vector<std::uint32_t> ks_;
  std::vector<double> vs_;
};

template <class Sink>
void RowEvaluator::visit(Sink&& sink) const {
  constexpr int kMax = Subset::kMaxDim;
  const std::uint32_t* K[kMax];
  const double* V[kMax];
  int C[kMax];
  int pos[kMax];
  double pre[kMax + 1];
  std::uint64_t col[kMax + 1];
  for (const Plan& p : plans_) {
    const int s = static_cast<int>(p.slots.size());
    if (s == 0) {
      sink(p.offset, 1.0);
      continue;
    }
    bool empty = false;
    for (int r = 0; r < s; ++r) {
      const auto sl = static_cast<std::size_t>(p.slots[static_cast<std::size_t>(r)]);
      K[r] = ks_.data() + sl * static_cast<std::size_t>(width_);
      V[r] = vs_.data() + sl * static_cast<std::size_t>(width_);
      C[r] = counts_[sl];
      pos[r] = 0;
      if (C[r] == 0) empty = true;
    }
    if (empty) continue;
    pre[0] = 1.0;
    col[0] = p.offset;
    for (int r = 0; r < s; ++r) {
      pre[r + 1] = pre[r] * V[r][0];
      col[r + 1] = col[r] + K[r][0] * p.strides[static_cast<std::size_t>(r)];
    }
    for (;;) {
      sink(col[s], pre[s]);
      int r = s - 1;
      while (r >= 0 && ++pos[r] == C[r]) pos[r--] = 0;
      if (r < 0) break;
      for (int q = r; q < s; ++q) {
        pre[q + 1] = pre[q] * V[q][pos[q]];
        col[q + 1] = col[q] + K[q][pos[q]] * p.strides[static_cast<std::size_t>(q)];
      }
    }
  }
}

}  // namespace hwr
