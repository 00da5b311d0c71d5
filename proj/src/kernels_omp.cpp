#include <algorithm>
#include <vector>

#include "hwr/kernels.hpp"
#include "hwr/row_evaluator.hpp"

#ifdef HWR_HAVE_OPENMP
#include <omp.h>
#endif

namespace hwr::kernels {

namespace {
using Index = std::ptrdiff_t;
}

void matvec_omp(const CsrView& A, const double* x, double* y, int threads) {
  const auto M = static_cast<Index>(A.rows);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index i = 0; i < M; ++i) {
    double acc = 0.0;
    for (std::uint64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) acc += A.val[p] * x[A.col[p]];
    y[i] = acc;
  }
}

void rmatvec_omp(const CsrView& A, const double* r, double* out, int threads) {
  if (threads <= 1) {
    rmatvec_serial(A, r, out);
    return;
  }
  const auto M = static_cast<Index>(A.rows);
  const auto N = static_cast<Index>(A.cols);
  std::vector<double> partial(static_cast<std::size_t>(threads) * static_cast<std::size_t>(N), 0.0);
#pragma omp parallel num_threads(threads)
  {
#ifdef HWR_HAVE_OPENMP
    const int t = omp_get_thread_num();
#else
    const int t = 0;
#endif
    double* acc = partial.data() + static_cast<std::size_t>(t) * static_cast<std::size_t>(N);
#pragma omp for schedule(static)
    for (Index i = 0; i < M; ++i) {
      const double ri = r[i];
      for (std::uint64_t p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p) acc[A.col[p]] += A.val[p] * ri;
    }
#pragma omp for schedule(static)
    for (Index c = 0; c < N; ++c) {
      double s = 0.0;
      for (int q = 0; q < threads; ++q) s += partial[static_cast<std::size_t>(q) * static_cast<std::size_t>(N) + static_cast<std::size_t>(c)];
      out[c] = s;
    }
  }
}

CsrArrays assemble_omp(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const SampleSet& X, int threads) {
  const auto M = static_cast<Index>(X.size());
  CsrArrays out;
  out.row_ptr.assign(static_cast<std::size_t>(M) + 1, 0);
#pragma omp parallel num_threads(threads)
  {
    RowEvaluator ev(basis, idx);
#pragma omp for schedule(static)
    for (Index i = 0; i < M; ++i) {
      ev.load(X.node(static_cast<std::size_t>(i)));
      out.row_ptr[static_cast<std::size_t>(i) + 1] = ev.count();
    }
  }
  for (Index i = 0; i < M; ++i) out.row_ptr[static_cast<std::size_t>(i) + 1] += out.row_ptr[static_cast<std::size_t>(i)];
  out.col.resize(out.row_ptr.back());
  out.val.resize(out.row_ptr.back());
#pragma omp parallel num_threads(threads)
  {
    RowEvaluator ev(basis, idx);
#pragma omp for schedule(static)
    for (Index i = 0; i < M; ++i) {
      ev.load(X.node(static_cast<std::size_t>(i)));
      std::uint64_t p = out.row_ptr[static_cast<std::size_t>(i)];
      ev.visit([&](std::uint64_t c, double v) {
        out.col[p] = static_cast<std::uint32_t>(c);
        out.val[p] = v;
        ++p;
      });
    }
  }
  return out;
}

void evaluate_omp(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const double* coeffs,
                  const double* nodes, std::size_t count, double* out, int threads) {
  const auto d = static_cast<std::size_t>(idx.dim());
  const auto n = static_cast<Index>(count);
#pragma omp parallel num_threads(threads)
  {
    RowEvaluator ev(basis, idx);
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      ev.load({nodes + static_cast<std::size_t>(i) * d, d});
      double acc = 0.0;
      ev.visit([&](std::uint64_t c, double v) { acc += v * coeffs[c]; });
      out[i] = acc;
    }
  }
}

}  // namespace hwr::kernels
