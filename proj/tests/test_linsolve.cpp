#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "splitpar/linsolve.hpp"
#include "splitpar/steppers.hpp"
#include "test_support.hpp"

using namespace splitpar;
using splitpar::testing::random_vector;
using splitpar::testing::rel_diff;

namespace {

SparseOperator random_spd(int n, unsigned seed) {
  const Vector r = random_vector(n * n, seed);
  const Eigen::MatrixXd R = Eigen::Map<const Eigen::MatrixXd>(r.data(), n, n);
  const Eigen::MatrixXd S = R * R.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  std::vector<SparseOperator::Triplet> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.emplace_back(i, j, S(i, j));
  return SparseOperator::from_triplets(static_cast<std::size_t>(n), t);
}

SparseOperator laplacian(int M) { return assemble_operator(Grid(M), make_coefficient(Coefficient::a1), constant_field(0.0)); }

}  // namespace

TEST(Factorization, ZeroShiftIsIdentity) {
  const Factorization f(laplacian(8), 0.0);
  const Vector b = random_vector(49, 1);
  EXPECT_EQ(f.solve(b), b);
}

TEST(Factorization, ScalarSystem) {
  const Factorization f(splitpar::testing::scalar_operator(2.0), 0.5);
  EXPECT_DOUBLE_EQ(f.solve(splitpar::testing::scalar(2.0))[0], 1.0);
}

TEST(Factorization, ReusableAcrossRightHandSides) {
  const auto A = laplacian(16);
  const Factorization f(A, 0.01);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Vector b = random_vector(225, seed);
    const Vector x = f.solve(b);
    EXPECT_LE((x + 0.01 * A.apply(x) - b).lpNorm<Eigen::Infinity>(), 1e-12);
  }
  EXPECT_EQ(f.solve(Vector::Zero(225)).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_THROW(f.solve(Vector::Zero(3)), InvalidInput);
}

TEST(Factorization, CrankNicolsonSystemResidual) {
  const Grid g(40);
  const auto A = assemble_operator(g, make_coefficient(Coefficient::a5), constant_field(0.0));
  const double shift = 0.5 * g.h();
  const Factorization f(A, shift);
  const Vector b = random_vector(static_cast<Eigen::Index>(g.size()), 4);
  const Vector x = f.solve(b);
  EXPECT_LE((x + shift * A.apply(x) - b).norm() / b.norm(), 1e-12);
}

TEST(Factorization, NonPositiveDefiniteReportsPivot) {
  // I + (-2) * I = -I.
  const auto I = SparseOperator::from_triplets(3, {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
  try {
    Factorization f(I, -2.0);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GE(e.pivot(), 0);
    EXPECT_LT(e.pivot(), 3);
  }
  // Only row 1 fails.
  const auto D = SparseOperator::from_triplets(3, {{0, 0, 0.0}, {1, 1, -3.0}, {2, 2, 0.0}});
  try {
    Factorization f(D, 1.0);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.pivot(), 1);
  }
}

TEST(Cg, MatchesDirectOnRandomSpd) {
  const auto A = random_spd(20, 1);
  const Vector b = random_vector(20, 8);
  const Vector xd = Factorization(A, 1.0).solve(b);
  const Vector xc = CgSolver(A, 1.0, 1e-14, std::nullopt).solve(b);
  EXPECT_LE(rel_diff(xc, xd), 1e-10);
}

TEST(Cg, ZeroRightHandSide) {
  const CgSolver cg(laplacian(8), 0.1, 1e-12, std::nullopt);
  EXPECT_EQ(cg.solve(Vector::Zero(49)).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Cg, NonConvergenceCarriesResidual) {
  const CgSolver cg(laplacian(32), 1.0, 1e-14, 2);
  try {
    cg.solve(random_vector(961, 3));
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 1e-14);
  }
}

TEST(ShiftedSolver, DirectAndCgAgree) {
  const auto A = laplacian(24);
  const Vector b = random_vector(529, 6);
  const ShiftedSolver d(A, 0.02), c(A, 0.02, {SolverKind::cg, 1e-13, std::nullopt});
  EXPECT_LE(rel_diff(d.solve(b), c.solve(b)), 1e-10);
  EXPECT_EQ(parse_solver("cg"), SolverKind::cg);
  EXPECT_THROW(parse_solver("lu"), InvalidInput);
}

TEST(BlockSolver, MatchesFullSolveForDecoupledOperator) {
  const Grid g(40);
  const auto split = build_dd_split(g, make_coefficient(Coefficient::a2), constant_field(0.0),
                                    make_partition_of_unity(make_strip_decomposition(4, 1.0 / 8)));
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& A = split.parts[k];
    const BlockSolver blocks(A, 0.5 * g.h());
    EXPECT_EQ(blocks.block_count(), 4u);
    const Vector b = random_vector(static_cast<Eigen::Index>(g.size()), 10 + static_cast<unsigned>(k));
    EXPECT_LE(rel_diff(blocks.solve(b), Factorization(A, 0.5 * g.h()).solve(b)), 1e-12);
  }
}

TEST(BlockSolver, CopiesRowsOutsideBlocks) {
  const auto A = SparseOperator::from_triplets(4, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}});
  const BlockSolver s(A, 1.0);
  ASSERT_EQ(s.block_count(), 1u);
  const Vector b = (Vector(4) << 1.0, 1.0, 5.0, -7.0).finished();
  const Vector x = s.solve(b);
  EXPECT_DOUBLE_EQ(x[2], 5.0);
  EXPECT_DOUBLE_EQ(x[3], -7.0);
  EXPECT_NEAR(x[0], 0.5, 1e-15);
  EXPECT_NEAR(x[1], 0.5, 1e-15);
}

TEST(BlockSolver, DirectAndCgRunsAgree) {
  const auto p = make_problem(Coefficient::a2);
  const Grid g(40);
  StepperConfig cfg;
  cfg.method = Method::dg_dd;
  std::vector<Vector> direct, cg;
  integrate(p, g, cfg, [&](int, double, const Vector& u) { direct.push_back(u); });
  cfg.solver = {SolverKind::cg, 1e-13, std::nullopt};
  integrate(p, g, cfg, [&](int, double, const Vector& u) { cg.push_back(u); });
  ASSERT_EQ(direct.size(), cg.size());
  for (std::size_t n = 0; n < direct.size(); ++n) EXPECT_LE((direct[n] - cg[n]).lpNorm<Eigen::Infinity>(), 1e-9) << n;
}
