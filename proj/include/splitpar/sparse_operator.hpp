#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "splitpar/errors.hpp"

namespace splitpar {

using Vector = Eigen::VectorXd;

/// Square sparse matrix in compressed-row storage with sorted column indices.
/// Immutable once built.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  SparseOperator() = default;

  explicit SparseOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidInput("sparse operator must be square");
    m_.makeCompressed();
  }

  /// Duplicate (row, col) triplets are summed.
  static SparseOperator from_triplets(std::size_t n, const std::vector<Triplet>& entries) {
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(entries.begin(), entries.end());
    return SparseOperator(std::move(m));
  }

  static SparseOperator zero(std::size_t n) { return SparseOperator(Matrix(n, n)); }

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nonzeros() const noexcept { return static_cast<std::size_t>(m_.nonZeros()); }
  const Matrix& matrix() const noexcept { return m_; }

  Vector apply(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != size())
      throw InvalidInput("apply: vector length " + std::to_string(v.size()) +
                         " does not match operator size " + std::to_string(size()));
    return m_ * v;
  }

  double coeff(std::size_t i, std::size_t j) const {
    return m_.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double max_abs() const {
    double r = 0.0;
    for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) r = std::max(r, std::abs(m_.valuePtr()[k]));
    return r;
  }

  /// max |A_ij - A_ji|.
  double asymmetry() const {
    const Matrix t = m_.transpose();
    const Matrix d = m_ - t;
    double r = 0.0;
    for (Eigen::Index k = 0; k < d.nonZeros(); ++k) r = std::max(r, std::abs(d.valuePtr()[k]));
    return r;
  }

  bool row_empty(std::size_t i) const {
    const auto r = static_cast<Eigen::Index>(i);
    for (Matrix::InnerIterator it(m_, r); it; ++it)
      if (it.value() != 0.0) return false;
    return true;
  }

  SparseOperator operator+(const SparseOperator& o) const {
    if (o.size() != size()) throw InvalidInput("operator sum: size mismatch");
    return SparseOperator(Matrix(m_ + o.m_));
  }

  SparseOperator operator-(const SparseOperator& o) const {
    if (o.size() != size()) throw InvalidInput("operator difference: size mismatch");
    return SparseOperator(Matrix(m_ - o.m_));
  }

  /// Principal submatrix on `rows` (sorted global indices), in that order.
  SparseOperator restrict_to(const std::vector<std::size_t>& rows) const {
    std::vector<Eigen::Index> local(size(), -1);
    for (std::size_t k = 0; k < rows.size(); ++k) local[rows[k]] = static_cast<Eigen::Index>(k);
    std::vector<Triplet> t;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      for (Matrix::InnerIterator it(m_, static_cast<Eigen::Index>(rows[k])); it; ++it) {
        const Eigen::Index c = local[static_cast<std::size_t>(it.col())];
        if (c >= 0) t.emplace_back(static_cast<Eigen::Index>(k), c, it.value());
      }
    }
    return from_triplets(rows.size(), t);
  }

 private:
  Matrix m_;
};

/// Connected components of the coupling graph of `op`. Rows with no nonzero
/// entry belong to no block. Each block is sorted; blocks are ordered by their
/// smallest index.
inline std::vector<std::vector<std::size_t>> coupled_blocks(const SparseOperator& op) {
  const std::size_t n = op.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<bool> active(n, false);
  const auto& m = op.matrix();
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseOperator::Matrix::InnerIterator it(m, r); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto i = static_cast<std::size_t>(r), j = static_cast<std::size_t>(it.col());
      active[i] = active[j] = true;
      const auto ri = find(i), rj = find(j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return blocks;
}

}  // namespace splitpar
