#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "splitpar/errors.hpp"

namespace splitpar {

/// Uniform (M+1)x(M+1) node lattice on the unit square. Only the (M-1)^2
/// interior nodes carry unknowns; they are numbered row-major with x fastest.
class Grid {
 public:
  explicit Grid(int M) : M_(M) {
    if (M < 4) throw InvalidInput("grid needs M >= 4, got M = " + std::to_string(M));
  }

  int M() const noexcept { return M_; }
  double h() const noexcept { return 1.0 / M_; }
  /// Interior nodes per direction.
  int n1() const noexcept { return M_ - 1; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(M_ - 1) * (M_ - 1); }

  double coord(int i) const noexcept { return static_cast<double>(i) / M_; }
  /// Coordinate of the half-index point i + 1/2.
  double midpoint(int i) const noexcept { return static_cast<double>(2 * i + 1) / (2.0 * M_); }

  /// Linear index of interior node (i, j), 1 <= i, j <= M-1.
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j - 1) * (M_ - 1) + static_cast<std::size_t>(i - 1);
  }

  std::pair<int, int> node(std::size_t k) const noexcept {
    const auto n = static_cast<std::size_t>(M_ - 1);
    return {static_cast<int>(k % n) + 1, static_cast<int>(k / n) + 1};
  }

  bool interior(int i, int j) const noexcept { return i >= 1 && i < M_ && j >= 1 && j < M_; }

 private:
  int M_;
};

}  // namespace splitpar
