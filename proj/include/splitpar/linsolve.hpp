#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "splitpar/errors.hpp"
#include "splitpar/sparse_operator.hpp"

namespace splitpar {

enum class SolverKind { direct, cg };

inline SolverKind parse_solver(const std::string& s) {
  if (s == "direct") return SolverKind::direct;
  if (s == "cg") return SolverKind::cg;
  throw InvalidInput("unknown solver '" + s + "' (expected direct or cg)");
}

struct SolverSettings {
  SolverKind kind = SolverKind::direct;
  double cg_tolerance = 1e-12;
  /// Defaults to 10 N.
  std::optional<long> cg_max_iterations;
};

namespace detail {

inline SparseOperator::Matrix shifted_identity(const SparseOperator& op, double shift) {
  using Col = Eigen::SparseMatrix<double>;
  Col id(op.matrix().rows(), op.matrix().cols());
  id.setIdentity();
  Col m = id + shift * Col(op.matrix());
  m.makeCompressed();
  return m;
}

}  // namespace detail

/// Sparse LDL^T factorization of I + shift * op (fill-reducing AMD ordering),
/// reusable across right-hand sides. Throws SolverError naming the offending
/// row if a pivot is not positive.
class Factorization {
 public:
  Factorization(const SparseOperator& op, double shift) : n_(op.size()) {
    matrix_ = detail::shifted_identity(op, shift);
    ldlt_ = std::make_unique<Solver>();
    ldlt_->compute(matrix_);
    if (ldlt_->info() != Eigen::Success) throw SolverError("sparse factorization failed");
    const auto& D = ldlt_->vectorD();
    for (Eigen::Index p = 0; p < D.size(); ++p) {
      if (!(D[p] > 0.0)) {
        const auto row = ldlt_->permutationPinv().indices()[p];
        throw SolverError("matrix is not positive definite: non-positive pivot at row " + std::to_string(row),
                          static_cast<std::ptrdiff_t>(row));
      }
    }
  }

  std::size_t size() const noexcept { return n_; }

  Vector solve(const Vector& rhs) const {
    if (static_cast<std::size_t>(rhs.size()) != n_) throw InvalidInput("solve: right-hand side size mismatch");
    Vector x = ldlt_->solve(rhs);
    if (ldlt_->info() != Eigen::Success) throw SolverError("triangular solve failed");
    return x;
  }

 private:
  using Solver = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>;
  std::size_t n_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Solver> ldlt_;
};

/// Jacobi-preconditioned conjugate gradients on I + shift * op.
class CgSolver {
 public:
  CgSolver(const SparseOperator& op, double shift, double tolerance, std::optional<long> max_iterations)
      : n_(op.size()), matrix_(detail::shifted_identity(op, shift)) {
    cg_ = std::make_unique<Solver>();
    cg_->setTolerance(tolerance);
    cg_->setMaxIterations(max_iterations.value_or(10 * static_cast<long>(n_)));
    cg_->compute(matrix_);
  }

  Vector solve(const Vector& rhs) const {
    if (static_cast<std::size_t>(rhs.size()) != n_) throw InvalidInput("solve: right-hand side size mismatch");
    if (rhs.squaredNorm() == 0.0) return Vector::Zero(rhs.size());
    Vector x = cg_->solve(rhs);
    if (cg_->info() != Eigen::Success)
      throw SolverError("conjugate gradients did not converge in " + std::to_string(cg_->iterations()) +
                            " iterations (relative residual " + std::to_string(cg_->error()) + ")",
                        -1, cg_->error());
    return x;
  }

 private:
  using Solver = Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>;
  std::size_t n_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Solver> cg_;
};

/// Solver for (I + shift * op) x = b, direct or iterative per settings.
class ShiftedSolver {
 public:
  ShiftedSolver(const SparseOperator& op, double shift, const SolverSettings& s = {}) {
    if (s.kind == SolverKind::direct)
      direct_.emplace(op, shift);
    else
      cg_.emplace(op, shift, s.cg_tolerance, s.cg_max_iterations);
  }

  Vector solve(const Vector& rhs) const { return direct_ ? direct_->solve(rhs) : cg_->solve(rhs); }

 private:
  std::optional<Factorization> direct_;
  std::optional<CgSolver> cg_;
};

/// Stage solver for (I + shift * A) x = b when A decouples into index blocks.
/// Each block gets its own solver on the restricted matrix; rows of A outside
/// every block are identity rows, so x copies b there.
class BlockSolver {
 public:
  BlockSolver(const SparseOperator& op, double shift, std::vector<std::vector<std::size_t>> blocks,
              const SolverSettings& s = {})
      : n_(op.size()), blocks_(std::move(blocks)) {
    solvers_.reserve(blocks_.size());
    for (const auto& b : blocks_) solvers_.emplace_back(op.restrict_to(b), shift, s);
  }

  /// Blocks taken from the coupling graph of `op`.
  BlockSolver(const SparseOperator& op, double shift, const SolverSettings& s = {})
      : BlockSolver(op, shift, coupled_blocks(op), s) {}

  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

  Vector solve(const Vector& rhs) const {
    if (static_cast<std::size_t>(rhs.size()) != n_) throw InvalidInput("solve: right-hand side size mismatch");
    Vector x = rhs;
    // Blocks are independent; this loop is the fork-join point if solved in parallel.
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& idx = blocks_[b];
      Vector local(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) local[static_cast<Eigen::Index>(k)] = rhs[static_cast<Eigen::Index>(idx[k])];
      const Vector y = solvers_[b].solve(local);
      for (std::size_t k = 0; k < idx.size(); ++k) x[static_cast<Eigen::Index>(idx[k])] = y[static_cast<Eigen::Index>(k)];
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<ShiftedSolver> solvers_;
};

}  // namespace splitpar
