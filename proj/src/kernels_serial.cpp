#include <algorithm>

#include "hwr/kernels.hpp"
#include "hwr/row_evaluator.hpp"

namespace hwr::kernels {

void matvec_serial(const CsrView& A, const double* x, double* y) {
  for (std::size_t i = 0; i < A.rows; ++i) {
    double acc = 0.0;
    for (std::uint64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) acc += A.val[p] * x[A.col[p]];
    y[i] = acc;
  }
}

void rmatvec_serial(const CsrView& A, const double* r, double* out) {
  std::fill(out, out + A.cols, 0.0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    const double ri = r[i];
    for (std::uint64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) out[A.col[p]] += A.val[p] * ri;
  }
}

CsrArrays assemble_serial(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const SampleSet& X) {
  const std::size_t M = X.size();
  CsrArrays out;
  out.row_ptr.assign(M + 1, 0);
  RowEvaluator ev(basis, idx);
  for (std::size_t i = 0; i < M; ++i) {
    ev.load(X.node(i));
    out.row_ptr[i + 1] = out.row_ptr[i] + ev.count();
  }
  out.col.resize(out.row_ptr[M]);
  out.val.resize(out.row_ptr[M]);
  for (std::size_t i = 0; i < M; ++i) {
    ev.load(X.node(i));
    std::uint64_t p = out.row_ptr[i];
    ev.visit([&](std::uint64_t c, double v) {
      out.col[p] = static_cast<std::uint32_t>(c);
      out.val[p] = v;
      ++p;
    });
  }
  return out;
}

void evaluate_serial(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const double* coeffs,
                     const double* nodes, std::size_t count, double* out) {
  RowEvaluator ev(basis, idx);
  const auto d = static_cast<std::size_t>(idx.dim());
  for (std::size_t i = 0; i < count; ++i) {
    ev.load({nodes + i * d, d});
    double acc = 0.0;
    ev.visit([&](std::uint64_t c, double v) { acc += v * coeffs[c]; });
    out[i] = acc;
  }
}

}  // namespace hwr::kernels
