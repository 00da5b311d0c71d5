#include "hwr/rng.hpp"

namespace hwr {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed + kGolden) ^ splitmix64(stream))) {}

CounterRng CounterRng::substream(std::uint64_t seed, std::string_view name) {
  return CounterRng(seed, fnv1a64(name));
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return splitmix64(key_ + (counter + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

}  // namespace hwr
