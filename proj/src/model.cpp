#include "hwr/model.hpp"

#include <string>

#include "hwr/errors.hpp"
#include "hwr/kernels.hpp"

namespace hwr {

WaveletModel::WaveletModel(std::shared_ptr<const WaveletBasis> basis, std::shared_ptr<const HyperbolicIndexSet> idx,
                           std::vector<double> coefficients)
    : basis_(std::move(basis)), idx_(std::move(idx)), coeffs_(std::move(coefficients)) {
  if (!basis_ || !idx_) throw Error(Errc::InvalidArgument, "model needs a basis and an index set");
  if (coeffs_.size() != idx_->size())
    throw Error(Errc::LengthMismatch, "model has " + std::to_string(coeffs_.size()) + " coefficients for " +
                                          std::to_string(idx_->size()) + " columns");
}

std::span<const double> WaveletModel::block_coefficients(std::size_t block) const {
  const Block& b = idx_->blocks()[block];
  return {coeffs_.data() + b.offset, static_cast<std::size_t>(b.size)};
}

double WaveletModel::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw Error(Errc::DimensionMismatch, "evaluation point has wrong dimension");
  double out = 0.0;
  kernels::evaluate_serial(*basis_, *idx_, coeffs_.data(), x.data(), 1, &out);
  return out;
}

std::vector<double> WaveletModel::evaluate_many(std::span<const double> nodes, const ExecPolicy& p) const {
  const auto d = static_cast<std::size_t>(dim());
  if (nodes.size() % d != 0) throw Error(Errc::LengthMismatch, "node storage is not a multiple of d");
  const std::size_t count = nodes.size() / d;
  std::vector<double> out(count);
  const int t = resolve_threads(p);
  if (t <= 1) kernels::evaluate_serial(*basis_, *idx_, coeffs_.data(), nodes.data(), count, out.data());
  else kernels::evaluate_omp(*basis_, *idx_, coeffs_.data(), nodes.data(), count, out.data(), t);
  return out;
}

double WaveletModel::constant_term() const {
  const std::vector<int> root(static_cast<std::size_t>(dim()), -1);
  const auto b = idx_->find_block(root);
  return b ? coeffs_[idx_->blocks()[*b].offset] : 0.0;
}

}  // namespace hwr
