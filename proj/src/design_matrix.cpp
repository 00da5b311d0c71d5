#include "hwr/design_matrix.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hwr/errors.hpp"
#include "hwr/kernels.hpp"
#include "hwr/row_evaluator.hpp"

namespace hwr {

void SampleSet::validate(bool require_values) const {
  if (d < 1 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "sample dimension must lie in [1, 64]");
  if (nodes.empty() || nodes.size() % static_cast<std::size_t>(d) != 0)
    throw Error(Errc::LengthMismatch, "node storage is not a nonempty multiple of d");
  for (double x : nodes) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteInput, "non-finite node coordinate");
    if (x < -0.5 || x >= 0.5) throw Error(Errc::InvalidArgument, "node coordinate outside [-1/2, 1/2)");
  }
  if (require_values && values.empty()) throw Error(Errc::LengthMismatch, "sample values are required");
  if (!values.empty()) {
    if (values.size() != size()) throw Error(Errc::LengthMismatch, "value count does not match node count");
    for (double y : values)
      if (!std::isfinite(y)) throw Error(Errc::NonFiniteInput, "non-finite sample value");
  }
}

double wrap_coordinate(double x) {
  if (x >= -0.5 && x < 0.5) return x;
  double w = x - std::floor(x + 0.5);
  if (w < -0.5) w += 1.0;
  if (w >= 0.5) w -= 1.0;
  return w;
}

std::size_t wrap_to_torus(SampleSet& X) {
  std::size_t moved = 0;
  for (double& x : X.nodes) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteInput, "non-finite node coordinate");
    const double w = wrap_coordinate(x);
    if (w != x) {
      x = w;
      ++moved;
    }
  }
  return moved;
}

RowEvaluator::RowEvaluator(const WaveletBasis& basis, const HyperbolicIndexSet& idx)
    : basis_(&basis), idx_(&idx), width_(2 * SplineOrder::kMax) {
  const int d = idx.dim();
  const auto levels = idx.coordinate_levels();
  slot_base_.resize(static_cast<std::size_t>(d));
  int total = 0;
  for (int i = 0; i < d; ++i) {
    slot_base_[static_cast<std::size_t>(i)] = total;
    const int L = levels[static_cast<std::size_t>(i)];
    for (int l = -1; l <= L; ++l) {
      slot_level_.push_back(l);
      slot_coord_.push_back(i);
    }
    total += L + 2;
  }
  counts_.assign(static_cast<std::size_t>(total), 0);
  ks_.assign(static_cast<std::size_t>(total * width_), 0);
  vs_.assign(static_cast<std::size_t>(total * width_), 0.0);

  plans_.reserve(idx.blocks().size());
  for (const Block& b : idx.blocks()) {
    Plan p{b.offset, {}, {}};
    for (int i = 0; i < d; ++i) {
      const int j = b.level[static_cast<std::size_t>(i)];
      if (j >= 0) p.slots.push_back(slot(i, j));
    }
    const auto s = p.slots.size();
    p.strides.assign(s, 1);
    for (std::size_t r = s; r-- > 1;) {
      const int j_next = slot_level_[static_cast<std::size_t>(p.slots[r])];
      p.strides[r - 1] = p.strides[r] << j_next;
    }
    plans_.push_back(std::move(p));
  }
}

void RowEvaluator::load(std::span<const double> x) {
  for (std::size_t s = 0; s < counts_.size(); ++s) {
    const auto off = s * static_cast<std::size_t>(width_);
    counts_[s] = periodized_translates(*basis_, slot_level_[s], x[static_cast<std::size_t>(slot_coord_[s])],
                                       ks_.data() + off, vs_.data() + off);
  }
}

std::uint64_t RowEvaluator::count() const {
  std::uint64_t total = 0;
  for (const Plan& p : plans_) {
    std::uint64_t c = 1;
    for (int sl : p.slots) c *= static_cast<std::uint64_t>(counts_[static_cast<std::size_t>(sl)]);
    total += c;
  }
  return total;
}

DesignMatrix::DesignMatrix(std::size_t rows, std::uint64_t cols, std::vector<std::uint64_t> row_ptr,
                           std::vector<std::uint32_t> col_idx, std::vector<double> values,
                           std::shared_ptr<const HyperbolicIndexSet> idx)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)), idx_(std::move(idx)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size())
    throw Error(Errc::LengthMismatch, "inconsistent CSR arrays");
  if (cols_ > std::numeric_limits<std::uint32_t>::max()) throw Error(Errc::SizeOverflow, "too many columns");
  for (std::size_t i = 0; i < rows_; ++i)
    if (row_ptr_[i] > row_ptr_[i + 1]) throw Error(Errc::InvalidArgument, "row pointers must be nondecreasing");
  for (auto c : col_idx_)
    if (c >= cols_) throw Error(Errc::InvalidArgument, "column index out of range");
}

namespace {
kernels::CsrView view(const DesignMatrix& A) {
  return {A.rows(), A.cols(), A.row_ptr().data(), A.col_idx().data(), A.values().data()};
}
}  // namespace

void DesignMatrix::apply(std::span<const double> a, std::span<double> y, const ExecPolicy& p) const {
  if (a.size() != cols_ || y.size() != rows_) throw Error(Errc::LengthMismatch, "matvec length mismatch");
  const int t = resolve_threads(p);
  if (t <= 1) kernels::matvec_serial(view(*this), a.data(), y.data());
  else kernels::matvec_omp(view(*this), a.data(), y.data(), t);
}

void DesignMatrix::apply_transpose(std::span<const double> r, std::span<double> out, const ExecPolicy& p) const {
  if (r.size() != rows_ || out.size() != cols_) throw Error(Errc::LengthMismatch, "rmatvec length mismatch");
  const int t = resolve_threads(p);
  if (t <= 1) kernels::rmatvec_serial(view(*this), r.data(), out.data());
  else kernels::rmatvec_omp(view(*this), r.data(), out.data(), t);
}

std::vector<double> DesignMatrix::row_norms_squared() const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::uint64_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out[i] += values_[p] * values_[p];
  return out;
}

DesignMatrix assemble(const WaveletBasis& basis, std::shared_ptr<const HyperbolicIndexSet> idx, const SampleSet& X,
                      const ExecPolicy& p) {
  if (!idx) throw Error(Errc::InvalidArgument, "assemble needs an index set");
  if (X.d != idx->dim()) throw Error(Errc::DimensionMismatch,
                                     "nodes have dimension " + std::to_string(X.d) + ", index set " + std::to_string(idx->dim()));
  X.validate();
  const int t = resolve_threads(p);
  kernels::CsrArrays a = t <= 1 ? kernels::assemble_serial(basis, *idx, X) : kernels::assemble_omp(basis, *idx, X, t);
  const auto N = idx->size();
  return DesignMatrix(X.size(), N, std::move(a.row_ptr), std::move(a.col), std::move(a.val), std::move(idx));
}

std::vector<double> matvec(const DesignMatrix& A, std::span<const double> a, const ExecPolicy& p) {
  std::vector<double> y(A.rows());
  A.apply(a, y, p);
  return y;
}

std::vector<double> rmatvec(const DesignMatrix& A, std::span<const double> r, const ExecPolicy& p) {
  std::vector<double> out(static_cast<std::size_t>(A.cols()));
  A.apply_transpose(r, out, p);
  return out;
}

}  // namespace hwr
