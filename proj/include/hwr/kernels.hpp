#pragma once

// Hot loops in two flavours: *_serial is the reference with a fixed summation
// order, *_omp is the OpenMP version. Both must agree to rounding.

#include <cstdint>
#include <vector>

#include "hwr/index_set.hpp"
#include "hwr/sample_set.hpp"
#include "hwr/wavelet.hpp"

namespace hwr::kernels {

struct CsrView {
  std::size_t rows;
  std::uint64_t cols;
  const std::uint64_t* row_ptr;
  const std::uint32_t* col;
  const double* val;
};

struct CsrArrays {
  std::vector<std::uint64_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;
};

void matvec_serial(const CsrView& A, const double* x, double* y);
void rmatvec_serial(const CsrView& A, const double* r, double* out);
CsrArrays assemble_serial(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const SampleSet& X);
void evaluate_serial(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const double* coeffs,
                     const double* nodes, std::size_t count, double* out);

void matvec_omp(const CsrView& A, const double* x, double* y, int threads);
/// Scatter into per-thread partial vectors, then a column-parallel merge.
void rmatvec_omp(const CsrView& A, const double* r, double* out, int threads);
CsrArrays assemble_omp(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const SampleSet& X, int threads);
void evaluate_omp(const WaveletBasis& basis, const HyperbolicIndexSet& idx, const double* coeffs,
                  const double* nodes, std::size_t count, double* out, int threads);

}  // namespace hwr::kernels
