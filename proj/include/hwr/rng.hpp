#pragma once

#include <cstdint>
#include <string_view>

namespace hwr {

/// Counter-based generator: the i-th draw is a pure function of (key, i), so
/// any range of draws can be produced independently and in parallel.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  /// Named substream, e.g. substream(seed, "sampling").
  static CounterRng substream(std::uint64_t seed, std::string_view name);

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept;

  std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view s) noexcept;

}  // namespace hwr
