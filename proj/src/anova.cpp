#include "hwr/anova.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hwr/errors.hpp"

namespace hwr {

GramBlockTable::GramBlockTable(const WaveletBasis& basis, int max_level) {
  if (max_level < -1) throw Error(Errc::InvalidArgument, "max_level must be >= -1");
  if (max_level > 30) throw Error(Errc::SizeOverflow, "gram table level too large");
  const int reach = 2 * basis.order() - 2;
  lambda_.push_back({1.0});
  stencil_.push_back({{0U, 1.0}});
  for (int j = 0; j <= max_level; ++j) {
    const long P = 1L << j;
    std::vector<double> lam(static_cast<std::size_t>(P), 0.0);
    // lambda_k = sum_l ac(k - P l); fill k <= P/2 and mirror so the circulant is exactly symmetric
    for (long k = 0; k <= P / 2; ++k) {
      double s = 0.0;
      for (long lag = -reach; lag <= reach; ++lag)
        if (((lag - k) % P + P) % P == 0) s += basis.autocorrelation(static_cast<int>(lag));
      lam[static_cast<std::size_t>(k)] = s;
      lam[static_cast<std::size_t>((P - k) % P)] = s;
    }
    std::vector<std::pair<std::uint32_t, double>> st;
    for (long k = 0; k < P; ++k)
      if (lam[static_cast<std::size_t>(k)] != 0.0) st.emplace_back(static_cast<std::uint32_t>(k), lam[static_cast<std::size_t>(k)]);
    lambda_.push_back(std::move(lam));
    stencil_.push_back(std::move(st));
  }
}

std::span<const double> GramBlockTable::lambda(int j) const {
  if (j < -1 || j > max_level()) throw Error(Errc::InvalidArgument, "level outside gram table");
  return lambda_[static_cast<std::size_t>(j + 1)];
}

std::span<const std::pair<std::uint32_t, double>> GramBlockTable::stencil(int j) const {
  if (j < -1 || j > max_level()) throw Error(Errc::InvalidArgument, "level outside gram table");
  return stencil_[static_cast<std::size_t>(j + 1)];
}

double GramBlockTable::quadratic_form(std::span<const int> level, std::span<const double> a) const {
  std::size_t size = 1;
  for (int j : level) {
    if (j > max_level()) throw Error(Errc::InvalidArgument, "level outside gram table");
    if (j > 0) size <<= j;
  }
  if (a.size() != size) throw Error(Errc::LengthMismatch, "block coefficient count mismatch");

  std::vector<double> cur(a.begin(), a.end()), next(size);
  std::size_t inner = size;
  for (int j : level) {
    if (j < 0) continue;
    const std::size_t P = std::size_t{1} << j;
    inner /= P;
    const std::size_t outer = size / (P * inner);
    const auto st = stencil(j);
    // cyclic convolution along this mode
    for (std::size_t o = 0; o < outer; ++o) {
      const double* src = cur.data() + o * P * inner;
      double* dst = next.data() + o * P * inner;
      for (std::size_t k = 0; k < P; ++k) {
        double* out = dst + k * inner;
        std::fill(out, out + inner, 0.0);
        for (const auto& [off, w] : st) {
          const double* in = src + ((k + off) & (P - 1)) * inner;
          for (std::size_t i = 0; i < inner; ++i) out[i] += w * in[i];
        }
      }
    }
    std::swap(cur, next);
  }
  double q = 0.0;
  for (std::size_t i = 0; i < size; ++i) q += a[i] * cur[i];
  return q;
}

GramBlockTable gram_blocks(const WaveletBasis& basis, int max_level) { return GramBlockTable(basis, max_level); }

const AnovaTerm* AnovaReport::find(Subset u) const {
  for (const auto& t : terms)
    if (t.u == u) return &t;
  return nullptr;
}

std::vector<AnovaTerm> AnovaReport::ranked() const {
  std::vector<AnovaTerm> out = terms;
  std::stable_sort(out.begin(), out.end(), [](const AnovaTerm& a, const AnovaTerm& b) { return a.rho > b.rho; });
  return out;
}

double term_variance(const WaveletModel& model, const GramBlockTable& grams, Subset u) {
  if (u.empty()) throw Error(Errc::EmptySubset, "the empty set has no variance; use the grand mean");
  if (model.dim() < Subset::kMaxDim && (u.bits() >> model.dim()) != 0)
    throw Error(Errc::DimensionMismatch, "subset exceeds model dimension");
  const auto blocks = model.index_set().blocks();
  double s = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].support == u) s += grams.quadratic_form(blocks[b].level, model.block_coefficients(b));
  return s;
}

namespace {

AnovaReport decompose(const WaveletModel& model, const GramBlockTable& grams, const ExecPolicy& p) {
  const auto blocks = model.index_set().blocks();
  const auto nb = static_cast<std::ptrdiff_t>(blocks.size());
  std::vector<double> q(blocks.size(), 0.0);
  const int threads = resolve_threads(p);
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto i = static_cast<std::size_t>(b);
    if (!blocks[i].support.empty()) q[i] = grams.quadratic_form(blocks[i].level, model.block_coefficients(i));
  }

  std::vector<Subset> subsets;
  for (const auto& b : blocks) subsets.push_back(b.support);
  if (const auto& fam = model.index_set().family())
    for (Subset u : fam->members()) subsets.push_back(u);
  const SubsetFamily all(std::move(subsets));

  AnovaReport r;
  r.grand_mean = model.constant_term();
  std::map<std::uint64_t, double> var;
  for (std::size_t b = 0; b < blocks.size(); ++b)  // block order fixes the summation order
    if (!blocks[b].support.empty()) var[blocks[b].support.bits()] += q[b];
  for (Subset u : all.members()) {
    if (u.empty()) continue;
    const auto it = var.find(u.bits());
    r.terms.push_back({u, it == var.end() ? 0.0 : it->second, 0.0});
  }
  for (const auto& t : r.terms) r.total_variance += t.variance;
  return r;
}

}  // namespace

AnovaReport variance_report(const WaveletModel& model, const GramBlockTable& grams, const ExecPolicy& p) {
  AnovaReport r = decompose(model, grams, p);
  r.has_indices = false;
  return r;
}

AnovaReport sensitivity_indices(const WaveletModel& model, const GramBlockTable& grams, const ExecPolicy& p) {
  AnovaReport r = decompose(model, grams, p);
  if (!(r.total_variance > 0.0)) throw Error(Errc::ZeroVariance, "model has zero variance; indices are undefined");
  for (auto& t : r.terms) t.rho = t.variance / r.total_variance;
  return r;
}

double gram_quadratic_form(const WaveletModel& model, const GramBlockTable& grams) {
  const auto blocks = model.index_set().blocks();
  double s = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) s += grams.quadratic_form(blocks[b].level, model.block_coefficients(b));
  return s;
}

WaveletModel extract_term(const WaveletModel& model, Subset u) {
  if (u.empty()) throw Error(Errc::EmptySubset, "extract the constant via the grand mean");
  if (model.dim() < Subset::kMaxDim && (u.bits() >> model.dim()) != 0)
    throw Error(Errc::DimensionMismatch, "subset exceeds model dimension");
  const auto dims = u.members();
  const auto blocks = model.index_set().blocks();
  std::vector<std::vector<int>> levels;
  std::vector<std::size_t> picked;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].support != u) continue;
    std::vector<int> j;
    for (int i : dims) j.push_back(blocks[b].level[static_cast<std::size_t>(i)]);
    levels.push_back(std::move(j));
    picked.push_back(b);
  }
  // Blocks with a common support keep their relative order when restricted to u.
  auto idx = std::make_shared<const HyperbolicIndexSet>(HyperbolicIndexSet::from_levels(
      static_cast<int>(dims.size()), model.index_set().max_level(), levels, std::nullopt,
      std::numeric_limits<std::uint64_t>::max() / 4));
  std::vector<double> a;
  a.reserve(idx->size());
  for (std::size_t b : picked) {
    const auto c = model.block_coefficients(b);
    a.insert(a.end(), c.begin(), c.end());
  }
  return WaveletModel(model.basis_ptr(), std::move(idx), std::move(a));
}

SubsetFamily select_active(const AnovaReport& report, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(Errc::InvalidArgument, "epsilon must lie in (0, 1)");
  if (!report.has_indices) throw Error(Errc::ZeroVariance, "report has no sensitivity indices");
  std::vector<Subset> keep{Subset{}};
  for (const auto& t : report.terms)
    if (t.rho > epsilon) keep.push_back(t.u);
  return SubsetFamily(std::move(keep));
}

}  // namespace hwr
