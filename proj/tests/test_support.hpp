#pragma once

#include <Eigen/Dense>

#include <random>

#include "splitpar/sparse_operator.hpp"

namespace splitpar::testing {

inline Eigen::MatrixXd dense(const SparseOperator& op) { return Eigen::MatrixXd(op.matrix()); }

inline Vector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline double rel_diff(const Vector& a, const Vector& b) {
  const double scale = std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
  return scale == 0.0 ? 0.0 : (a - b).lpNorm<Eigen::Infinity>() / scale;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

inline SparseOperator scalar_operator(double value) {
  return SparseOperator::from_triplets(1, {{0, 0, value}});
}

inline Vector scalar(double value) { return Vector::Constant(1, value); }

}  // namespace splitpar::testing
