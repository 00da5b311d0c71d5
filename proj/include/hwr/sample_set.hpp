#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hwr {

/// M nodes on the torus [-1/2, 1/2)^d, stored row-major, with optional values.
struct SampleSet {
  int d = 0;
  std::vector<double> nodes;
  std::vector<double> values;  // empty until fitting

  std::size_t size() const { return d > 0 ? nodes.size() / static_cast<std::size_t>(d) : 0; }
  bool has_values() const { return !values.empty(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }

  /// Throws on ragged storage, non-finite entries or coordinates outside the torus.
  void validate(bool require_values = false) const;
};

/// Maps every coordinate into [-1/2, 1/2). Returns the number of coordinates moved.
std::size_t wrap_to_torus(SampleSet& X);
double wrap_coordinate(double x);

}  // namespace hwr
