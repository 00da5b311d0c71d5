#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hwr {

class WaveletBasis;

/// Subset of {0, ..., d-1} as a bitmask (d <= 64). Printed with 1-based labels.
class Subset {
 public:
  static constexpr int kMaxDim = 64;

  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}
  static Subset of(std::initializer_list<int> zero_based);
  static Subset from_labels(std::span<const int> one_based);

  std::uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  bool contains(int i) const { return (bits_ >> i) & 1U; }
  int size() const;
  bool subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
  Subset with(int i) const { return Subset(bits_ | (std::uint64_t{1} << i)); }

  std::vector<int> members() const;  // 0-based, ascending
  std::vector<int> labels() const;   // 1-based, ascending
  std::string to_string() const;     // "{1,3}", "{}"

  friend bool operator==(Subset a, Subset b) { return a.bits_ == b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Report order: by cardinality, then lexicographic in the sorted members.
bool subset_order(Subset a, Subset b);

/// Deduplicated family of subsets kept in report order.
class SubsetFamily {
 public:
  SubsetFamily() = default;
  explicit SubsetFamily(std::vector<Subset> members);

  /// U_nu: all u with |u| <= nu.
  static SubsetFamily up_to_order(int d, int nu);
  static SubsetFamily power_set(int d);

  std::span<const Subset> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(Subset u) const;
  bool subset_of(const SubsetFamily& other) const;
  std::string to_string() const;

  friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;

 private:
  std::vector<Subset> members_;
};

Subset level_support(std::span<const int> level);
/// |j|_1 over the nonnegative entries.
int level_norm(std::span<const int> level);

struct Block {
  std::vector<int> level;  // j, entries >= -1
  Subset support;
  int norm = 0;            // |j|_1
  std::uint64_t size = 1;  // 2^|j|_1
  std::uint64_t offset = 0;
};

inline constexpr std::uint64_t kDefaultColumnCap = std::uint64_t{1} << 31;

/// Ordered block list with contiguous global column numbering.
class HyperbolicIndexSet {
 public:
  /// Sorts (lexicographic, -1 first), deduplicates and numbers the given levels.
  static HyperbolicIndexSet from_levels(int d, int n, std::vector<std::vector<int>> levels,
                                        std::optional<SubsetFamily> family = std::nullopt,
                                        std::uint64_t cap = kDefaultColumnCap);

  int dim() const { return d_; }
  int max_level() const { return n_; }
  std::uint64_t size() const { return N_; }
  std::span<const Block> blocks() const { return blocks_; }
  const std::optional<SubsetFamily>& family() const { return family_; }
  /// Largest level used in each coordinate (-1 if never active).
  std::span<const int> coordinate_levels() const { return coord_levels_; }
  /// Supports realized by at least one block, in report order.
  SubsetFamily realized_supports() const;

  std::optional<std::size_t> find_block(std::span<const int> level) const;
  std::size_t block_of_column(std::uint64_t col) const;
  /// Row-major translation multi-index of a column within its block.
  std::vector<std::uint64_t> translation_of_column(std::uint64_t col) const;

 private:
  int d_ = 0;
  int n_ = 0;
  std::uint64_t N_ = 0;
  std::vector<Block> blocks_;
  std::optional<SubsetFamily> family_;
  std::vector<int> coord_levels_;
};

HyperbolicIndexSet build_hyperbolic(int d, int n, std::uint64_t cap = kDefaultColumnCap);
HyperbolicIndexSet build_restricted(int d, int n, const SubsetFamily& U, std::uint64_t cap = kDefaultColumnCap);

/// Column count of J_n^U without building it.
std::uint64_t count_columns(int d, int n, const SubsetFamily& U);

/// Sample count from the theoretical oversampling bound with tensor order p.
std::uint64_t recommended_samples(std::uint64_t N, double r, const WaveletBasis& basis, int p);
/// ceil(c * N ln N).
std::uint64_t log_oversampling(std::uint64_t N, double c = 2.0);
/// log(sqrt(e/2)), the factor in c_{m,d} = gamma^d * log(sqrt(e/2)).
double chernoff_constant();

}  // namespace hwr
