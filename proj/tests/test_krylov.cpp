#include <gtest/gtest.h>

#include "geoschwarz/krylov.hpp"
#include "geoschwarz/newton_schwarz.hpp"
#include "test_util.hpp"

using namespace geoschwarz;
using namespace testutil;

TEST(Gmres, SolvesNonsymmetricSystem) {
  std::mt19937_64 rng(1);
  const Matrix a = Matrix::Identity(30, 30) + 0.1 * gaussian(30, 30, rng);
  const Vector b = gaussian(30, 1, rng);
  const GmresResult r = gmres([&](const Vector& x) { return Vector(a * x); }, b);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((a * r.x - b).norm() / b.norm(), 1e-7);
  EXPECT_EQ(r.history.front(), 1.0);
  EXPECT_EQ(int(r.history.size()), r.iters + 1);
}

TEST(Gmres, ExactInDimensionSteps) {
  std::mt19937_64 rng(2);
  const Matrix a = gaussian(8, 8, rng) + 4 * Matrix::Identity(8, 8);
  const Vector b = gaussian(8, 1, rng);
  GmresOptions opts;
  opts.rel_tol = 1e-12;
  const GmresResult r = gmres([&](const Vector& x) { return Vector(a * x); }, b, opts);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iters, 8);
}

TEST(Gmres, ZeroRightHandSide) {
  const GmresResult r =
      gmres([](const Vector& x) { return Vector(2 * x); }, Vector::Zero(5));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.x.norm(), 0.0);
}

TEST(Gmres, RestartsAndReportsFailure) {
  std::mt19937_64 rng(3);
  // Spread-out spectrum so a short restart cannot finish in a few cycles.
  Vector diag = Vector::LinSpaced(60, 1.0, 1e4);
  const Vector b = gaussian(60, 1, rng);
  GmresOptions opts;
  opts.restart = 5;
  opts.max_iters = 20;
  opts.rel_tol = 1e-12;
  const GmresResult r = gmres(
      [&](const Vector& x) { return Vector(diag.cwiseProduct(x)); }, b, opts);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iters, 20);
  // Restarted GMRES residuals are non-increasing.
  for (std::size_t i = 1; i < r.history.size(); ++i)
    EXPECT_LE(r.history[i], r.history[i - 1] * (1 + 1e-12));
}

namespace {

BlockTridiagonalJacobian random_block_tridiagonal(int blocks, int size,
                                                  std::mt19937_64& rng) {
  BlockTridiagonalJacobian j;
  j.block_size = size;
  j.lower.resize(blocks);
  j.upper.resize(blocks);
  for (int r = 0; r < blocks; ++r) {
    if (r > 0) j.lower[r] = 0.3 * gaussian(size, size, rng);
    if (r + 1 < blocks) j.upper[r] = 0.3 * gaussian(size, size, rng);
  }
  return j;
}

}  // namespace

TEST(BlockTridiagonal, DenseStructure) {
  std::mt19937_64 rng(4);
  const auto j = random_block_tridiagonal(4, 3, rng);
  const Matrix dense = j.dense();
  ASSERT_EQ(dense.rows(), 12);
  EXPECT_EQ(dense.block(0, 0, 3, 3), Matrix::Identity(3, 3));
  EXPECT_EQ(dense.block(3, 0, 3, 3), j.lower[1]);
  EXPECT_EQ(dense.block(0, 3, 3, 3), j.upper[0]);
  EXPECT_EQ(dense.block(0, 6, 3, 6).norm(), 0.0);
}

TEST(BlockTridiagonal, ApplyMatchesDense) {
  std::mt19937_64 rng(5);
  const auto j = random_block_tridiagonal(5, 4, rng);
  const Vector x = gaussian(20, 1, rng);
  EXPECT_LT((j.apply(x) - j.dense() * x).norm(), 1e-13);
}

TEST(BlockTridiagonal, SolveMatchesDenseLu) {
  std::mt19937_64 rng(6);
  for (int blocks : {1, 2, 5, 9}) {
    const auto j = random_block_tridiagonal(blocks, 3, rng);
    const Vector b = gaussian(3 * blocks, 1, rng);
    const Vector x = j.solve(b);
    EXPECT_LT((j.dense() * x - b).norm(), 1e-11 * (1 + b.norm()));
  }
}

TEST(BlockTridiagonal, SingularPivotThrows) {
  BlockTridiagonalJacobian j;
  j.block_size = 2;
  // Second pivot is I - L_1 U_0 = 0.
  j.lower = {Matrix(), Matrix::Identity(2, 2)};
  j.upper = {Matrix::Identity(2, 2), Matrix()};
  try {
    j.solve(Vector::Ones(4));
    FAIL() << "expected SingularJacobian";
  } catch (const SingularJacobian& e) {
    EXPECT_EQ(e.block_row, 1);
    EXPECT_LE(e.rcond, 1e-14);
  }
}
