#include "hwr/index_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "hwr/errors.hpp"
#include "hwr/wavelet.hpp"

namespace hwr {

Subset Subset::of(std::initializer_list<int> zero_based) {
  Subset s;
  for (int i : zero_based) {
    if (i < 0 || i >= kMaxDim) throw Error(Errc::DimensionMismatch, "subset member out of range");
    s = s.with(i);
  }
  return s;
}

Subset Subset::from_labels(std::span<const int> one_based) {
  Subset s;
  for (int i : one_based) {
    if (i < 1 || i > kMaxDim) throw Error(Errc::DimensionMismatch, "subset label out of range: " + std::to_string(i));
    s = s.with(i - 1);
  }
  return s;
}

int Subset::size() const { return std::popcount(bits_); }

std::vector<int> Subset::members() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::vector<int> Subset::labels() const {
  auto m = members();
  for (int& i : m) ++i;
  return m;
}

std::string Subset::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int l : labels()) {
    if (!first) s += ",";
    s += std::to_string(l);
    first = false;
  }
  return s + "}";
}

bool subset_order(Subset a, Subset b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ma = a.members(), mb = b.members();
  return ma < mb;
}

SubsetFamily::SubsetFamily(std::vector<Subset> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end(), subset_order);
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SubsetFamily SubsetFamily::up_to_order(int d, int nu) {
  if (d < 1 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "dimension must lie in [1, 64]");
  if (nu < 0) throw Error(Errc::InvalidArgument, "superposition dimension must be nonnegative");
  std::vector<Subset> out{Subset{}};
  // grow by appending larger members to keep each subset generated once
  std::vector<Subset> frontier{Subset{}};
  for (int size = 1; size <= std::min(nu, d); ++size) {
    std::vector<Subset> next;
    for (Subset s : frontier) {
      const int start = s.empty() ? 0 : s.members().back() + 1;
      for (int i = start; i < d; ++i) next.push_back(s.with(i));
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return SubsetFamily(std::move(out));
}

SubsetFamily SubsetFamily::power_set(int d) { return up_to_order(d, d); }

bool SubsetFamily::contains(Subset u) const {
  return std::find(members_.begin(), members_.end(), u) != members_.end();
}

bool SubsetFamily::subset_of(const SubsetFamily& other) const {
  return std::all_of(members_.begin(), members_.end(), [&](Subset u) { return other.contains(u); });
}

std::string SubsetFamily::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ", ";
    s += members_[i].to_string();
  }
  return s + "}";
}

Subset level_support(std::span<const int> level) {
  Subset s;
  for (std::size_t i = 0; i < level.size(); ++i)
    if (level[i] >= 0) s = s.with(static_cast<int>(i));
  return s;
}

int level_norm(std::span<const int> level) {
  int n = 0;
  for (int j : level)
    if (j > 0) n += j;
  return n;
}

HyperbolicIndexSet HyperbolicIndexSet::from_levels(int d, int n, std::vector<std::vector<int>> levels,
                                                   std::optional<SubsetFamily> family, std::uint64_t cap) {
  if (d < 1 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "dimension must lie in [1, 64]");
  if (n < 0) throw Error(Errc::InvalidArgument, "level must be nonnegative");
  for (const auto& j : levels) {
    if (static_cast<int>(j.size()) != d) throw Error(Errc::DimensionMismatch, "level index has wrong length");
    for (int ji : j)
      if (ji < -1) throw Error(Errc::InvalidArgument, "level entries must be >= -1");
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  HyperbolicIndexSet idx;
  idx.d_ = d;
  idx.n_ = n;
  idx.family_ = std::move(family);
  idx.coord_levels_.assign(static_cast<std::size_t>(d), -1);
  idx.blocks_.reserve(levels.size());
  std::uint64_t offset = 0;
  for (auto& j : levels) {
    Block b;
    b.norm = level_norm(j);
    if (b.norm >= 63) throw Error(Errc::SizeOverflow, "block size 2^" + std::to_string(b.norm) + " overflows");
    b.size = std::uint64_t{1} << b.norm;
    b.support = level_support(j);
    b.offset = offset;
    if (b.size > cap || offset > cap - b.size)
      throw Error(Errc::SizeOverflow, "column count exceeds cap " + std::to_string(cap));
    offset += b.size;
    for (int i = 0; i < d; ++i)
      idx.coord_levels_[static_cast<std::size_t>(i)] = std::max(idx.coord_levels_[static_cast<std::size_t>(i)], j[static_cast<std::size_t>(i)]);
    b.level = std::move(j);
    idx.blocks_.push_back(std::move(b));
  }
  idx.N_ = offset;
  return idx;
}

SubsetFamily HyperbolicIndexSet::realized_supports() const {
  std::vector<Subset> s;
  for (const auto& b : blocks_) s.push_back(b.support);
  return SubsetFamily(std::move(s));
}

std::optional<std::size_t> HyperbolicIndexSet::find_block(std::span<const int> level) const {
  const std::vector<int> key(level.begin(), level.end());
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), key,
                             [](const Block& b, const std::vector<int>& k) { return b.level < k; });
  if (it == blocks_.end() || it->level != key) return std::nullopt;
  return static_cast<std::size_t>(it - blocks_.begin());
}

std::size_t HyperbolicIndexSet::block_of_column(std::uint64_t col) const {
  if (col >= N_) throw Error(Errc::BadTranslation, "column out of range");
  auto it = std::upper_bound(blocks_.begin(), blocks_.end(), col,
                             [](std::uint64_t c, const Block& b) { return c < b.offset; });
  return static_cast<std::size_t>(it - blocks_.begin()) - 1;
}

std::vector<std::uint64_t> HyperbolicIndexSet::translation_of_column(std::uint64_t col) const {
  const Block& b = blocks_[block_of_column(col)];
  std::uint64_t r = col - b.offset;
  std::vector<std::uint64_t> k(static_cast<std::size_t>(d_), 0);
  for (int i = d_ - 1; i >= 0; --i) {
    const int j = b.level[static_cast<std::size_t>(i)];
    if (j <= 0) continue;
    const std::uint64_t P = std::uint64_t{1} << j;
    k[static_cast<std::size_t>(i)] = r % P;
    r /= P;
  }
  return k;
}

namespace {

void enumerate_full(int d, int budget, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  const auto i = cur.size();
  if (static_cast<int>(i) == d) {
    out.push_back(cur);
    return;
  }
  for (int j = -1; j <= budget; ++j) {
    cur.push_back(j);
    enumerate_full(d, budget - std::max(j, 0), cur, out);
    cur.pop_back();
  }
}

void enumerate_on(const std::vector<int>& dims, std::size_t pos, int budget, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (pos == dims.size()) {
    out.push_back(cur);
    return;
  }
  const auto i = static_cast<std::size_t>(dims[pos]);
  for (int j = 0; j <= budget; ++j) {
    cur[i] = j;
    enumerate_on(dims, pos + 1, budget - j, cur, out);
  }
  cur[i] = -1;
}

void check_dims(int d, int n) {
  if (d < 1 || d > Subset::kMaxDim) throw Error(Errc::DimensionMismatch, "dimension must lie in [1, 64]");
  if (n < 0) throw Error(Errc::InvalidArgument, "level must be nonnegative");
}

}  // namespace

namespace {

// Columns contributed by one support of size s: sum_t C(t + s - 1, s - 1) 2^t.
long double support_columns(int s, int n) {
  if (s == 0) return 1.0L;
  long double binom = 1.0L, total = 0.0L;
  for (int t = 0; t <= n; ++t) {
    if (t > 0) binom = binom * (t + s - 1) / t;
    total += binom * std::ldexp(1.0L, t);
  }
  return total;
}

std::uint64_t saturate(long double total) {
  if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
    return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::llround(total));
}

std::uint64_t count_full(int d, int n) {
  long double total = 0.0L, binom = 1.0L;
  for (int s = 0; s <= d; ++s) {
    if (s > 0) binom = binom * (d - s + 1) / s;
    total += binom * support_columns(s, n);
  }
  return saturate(total);
}

}  // namespace

std::uint64_t count_columns(int d, int n, const SubsetFamily& U) {
  check_dims(d, n);
  long double total = 0.0L;
  for (Subset u : U.members()) {
    if (d < Subset::kMaxDim && (u.bits() >> d) != 0) throw Error(Errc::DimensionMismatch, "subset exceeds dimension");
    total += support_columns(u.size(), n);
  }
  return saturate(total);
}

HyperbolicIndexSet build_hyperbolic(int d, int n, std::uint64_t cap) {
  check_dims(d, n);
  if (count_full(d, n) > cap)
    throw Error(Errc::SizeOverflow, "column count exceeds cap " + std::to_string(cap));
  std::vector<std::vector<int>> levels;
  std::vector<int> cur;
  enumerate_full(d, n, cur, levels);
  return HyperbolicIndexSet::from_levels(d, n, std::move(levels), std::nullopt, cap);
}

HyperbolicIndexSet build_restricted(int d, int n, const SubsetFamily& U, std::uint64_t cap) {
  check_dims(d, n);
  if (U.size() == 0 || !U.contains(Subset{})) throw Error(Errc::EmptyFamily, "subset family must contain the empty set");
  if (count_columns(d, n, U) > cap) throw Error(Errc::SizeOverflow, "column count exceeds cap " + std::to_string(cap));
  std::vector<std::vector<int>> levels;
  std::vector<int> cur(static_cast<std::size_t>(d), -1);
  for (Subset u : U.members()) enumerate_on(u.members(), 0, n, cur, levels);
  return HyperbolicIndexSet::from_levels(d, n, std::move(levels), U, cap);
}

double chernoff_constant() { return 0.5 * (1.0 - std::log(2.0)); }

std::uint64_t recommended_samples(std::uint64_t N, double r, const WaveletBasis& basis, int p) {
  if (N < 2) throw Error(Errc::InvalidArgument, "recommended_samples needs N >= 2");
  if (!(r > 1.0)) throw Error(Errc::InvalidArgument, "confidence exponent r must exceed 1");
  const double ratio = std::pow(basis.c_psi() / basis.gamma(), p);
  const double Nd = static_cast<double>(N);
  const double M = std::ceil(ratio * (r + 1.0) / chernoff_constant() * Nd * std::log(Nd));
  if (!(M < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(M);
}

std::uint64_t log_oversampling(std::uint64_t N, double c) {
  const double Nd = static_cast<double>(std::max<std::uint64_t>(N, 1));
  return static_cast<std::uint64_t>(std::ceil(c * Nd * std::log(Nd)));
}

}  // namespace hwr
