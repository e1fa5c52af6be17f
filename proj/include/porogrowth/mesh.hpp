#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "porogrowth/errors.hpp"

namespace porogrowth {

/// Uniform partition of [0, L] into N - 1 elements of width h = L / (N - 1).
class Mesh1D {
public:
  Mesh1D(double length, std::size_t node_count) : length_(length), nodes_(node_count) {
    if (!(length > 0.0))
      throw InvalidDomain("domain length must be positive, got " + std::to_string(length));
    if (node_count < 3)
      throw InvalidDomain("at least 3 nodes are required, got " + std::to_string(node_count));
    spacing_ = length_ / static_cast<double>(nodes_ - 1);
  }

  double length() const noexcept { return length_; }
  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t element_count() const noexcept { return nodes_ - 1; }
  double spacing() const noexcept { return spacing_; }

  /// Node coordinate. The last node is pinned to L exactly.
  double x(std::size_t i) const noexcept {
    return i + 1 == nodes_ ? length_ : static_cast<double>(i) * spacing_;
  }

  double midpoint(std::size_t e) const noexcept { return 0.5 * (x(e) + x(e + 1)); }

  std::vector<double> coordinates() const {
    std::vector<double> xs(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) xs[i] = x(i);
    return xs;
  }

  /// Node closest to x = L/2 (lower one on ties).
  std::size_t mid_node() const noexcept { return (nodes_ - 1) / 2; }

  /// Lumped (nodal) mass weights: h/2 at the ends, h elsewhere.
  double lumped_weight(std::size_t i) const noexcept {
    return (i == 0 || i + 1 == nodes_) ? 0.5 * spacing_ : spacing_;
  }

  bool operator==(const Mesh1D&) const = default;

private:
  double length_;
  std::size_t nodes_;
  double spacing_ = 0.0;
};

inline Mesh1D build_mesh(double length, std::size_t node_count) {
  return Mesh1D(length, node_count);
}

} // namespace porogrowth
