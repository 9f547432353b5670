#include <gtest/gtest.h>

#include "geoschwarz/sphere.hpp"
#include "geoschwarz/stiefel.hpp"
#include "test_util.hpp"

using namespace geoschwarz;
using namespace testutil;

namespace {

Matrix random_stiefel(int n, int p, std::mt19937_64& rng) {
  return qf(gaussian(n, p, rng));
}

}  // namespace

TEST(StiefelProject, Examples) {
  std::mt19937_64 rng(1);
  StiefelGeometry st(6, 3);
  const Matrix y = random_stiefel(6, 3, rng);
  EXPECT_LT(st.project(y, y).norm(), 1e-14);
  const Matrix z = st.project(y, gaussian(6, 3, rng));
  EXPECT_LT((st.project(y, z) - z).norm(), 1e-14);

  StiefelGeometry col(3, 1);
  EXPECT_LT((col.project(e(3, 0), e(3, 0) + e(3, 1)) - e(3, 1)).norm(), 1e-16);
}

TEST(StiefelRetract, ZeroTangent) {
  std::mt19937_64 rng(2);
  StiefelGeometry st(5, 2);
  const Matrix y = random_stiefel(5, 2, rng);
  EXPECT_LT((st.retract(y, Matrix::Zero(5, 2)) - y).norm(), 1e-14);
}

TEST(StiefelRetract, SingleColumnMatchesSphere) {
  std::mt19937_64 rng(3);
  StiefelGeometry st(3, 1);
  SphereGeometry s(3);
  for (int k = 0; k < 20; ++k) {
    const Matrix x = unit_sphere_point(3, rng);
    const Matrix v = random_tangent(s, x, 0.1 + 0.2 * k, rng);
    EXPECT_LT((st.retract(x, v) - s.retract(x, v)).norm(), 1e-14);
  }
}

TEST(StiefelRetract, ConstraintHolds) {
  std::mt19937_64 rng(4);
  for (auto [n, p] : {std::pair{5, 2}, std::pair{10, 4}, std::pair{8, 8}}) {
    StiefelGeometry st(n, p);
    for (int k = 0; k < 10; ++k) {
      const Matrix y = random_stiefel(n, p, rng);
      const Matrix q = st.retract(y, random_tangent(st, y, 1.5, rng));
      EXPECT_LE((q.transpose() * q - Matrix::Identity(p, p)).norm(), 1e-13);
    }
  }
}

TEST(StiefelRetract, RankDeficientThrows) {
  StiefelGeometry st(3, 2);
  Matrix y(3, 2);
  y << 1, 0, 0, 1, 0, 0;
  Matrix v(3, 2);
  v << 0, 0, 0, -1, 0, 0;
  EXPECT_THROW(st.retract(y, v), DegenerateRetraction);
  EXPECT_THROW(st.normalize(Matrix::Zero(3, 2)), DegenerateInitialization);
}

TEST(Qf, PositiveDiagonal) {
  std::mt19937_64 rng(5);
  const Matrix z = gaussian(7, 3, rng);
  const Matrix q = qf(z);
  const Matrix r = q.transpose() * z;
  for (int i = 0; i < 3; ++i) EXPECT_GT(r(i, i), 0.0);
  EXPECT_LT((q * r - z).norm(), 1e-13);
}

TEST(StiefelExp, ZeroTangent) {
  std::mt19937_64 rng(6);
  StiefelGeometry st(5, 2);
  const Matrix y = random_stiefel(5, 2, rng);
  EXPECT_EQ(st.exp(y, Matrix::Zero(5, 2)), y);
}

TEST(StiefelExp, SingleColumnMatchesSphere) {
  std::mt19937_64 rng(7);
  StiefelGeometry st(3, 1);
  SphereGeometry s(3);
  for (int k = 0; k < 20; ++k) {
    const Matrix x = unit_sphere_point(3, rng);
    const Matrix v = random_tangent(s, x, 0.15 * (k + 1), rng);
    EXPECT_LT((st.exp(x, v) - s.exp(x, v)).norm(), 1e-10);
  }
}

// Property: the closed-form exponential solves c'' + c (c'^T c') = 0.
TEST(StiefelExp, GeodesicOdeResidual) {
  std::mt19937_64 rng(8);
  const double h = 1e-4;
  for (auto [n, p] : {std::pair{5, 2}, std::pair{12, 3}, std::pair{30, 5}}) {
    StiefelGeometry st(n, p);
    const Matrix y = random_stiefel(n, p, rng);
    const Matrix v = random_tangent(st, y, 1.0, rng);
    for (double t : {0.2, 0.5, 0.9}) {
      const Matrix c0 = st.exp(y, (t - h) * v);
      const Matrix c1 = st.exp(y, t * v);
      const Matrix c2 = st.exp(y, (t + h) * v);
      const Matrix acc = (c2 - 2 * c1 + c0) / (h * h);
      const Matrix vel = (c2 - c0) / (2 * h);
      EXPECT_LE((acc + c1 * (vel.transpose() * vel)).norm(), 1e-5);
    }
  }
}

// Property: geodesics stay on the manifold and move at constant speed.
TEST(StiefelExp, ConstraintAndConstantSpeed) {
  std::mt19937_64 rng(9);
  StiefelGeometry st(10, 4);
  const Matrix y = random_stiefel(10, 4, rng);
  const Matrix v = random_tangent(st, y, 2.0, rng);
  const double h = 1e-5;
  for (double t : {0.3, 0.7, 1.0}) {
    EXPECT_LT(st.constraint_residual(st.exp(y, t * v)), 1e-13);
    const Matrix vel = (st.exp(y, (t + h) * v) - st.exp(y, (t - h) * v)) / (2 * h);
    EXPECT_NEAR(vel.norm(), 2.0, 1e-8);
  }
}

TEST(StiefelLog, SamePointIsZero) {
  std::mt19937_64 rng(10);
  StiefelGeometry st(6, 2);
  const Matrix y = random_stiefel(6, 2, rng);
  EXPECT_EQ(st.log(y, y), Matrix::Zero(6, 2));
}

TEST(StiefelLog, RoundTrip) {
  std::mt19937_64 rng(11);
  for (auto [n, p] : {std::pair{5, 2}, std::pair{10, 3}, std::pair{20, 4}}) {
    StiefelGeometry st(n, p);
    for (int k = 0; k < 3; ++k) {
      const Matrix y = random_stiefel(n, p, rng);
      const Matrix u = random_tangent(st, y, 1.0, rng);
      EXPECT_LT((st.log(y, st.exp(y, 0.4 * u)) - 0.4 * u).norm(), 1e-6);
    }
  }
}

TEST(StiefelLog, SingleColumnMatchesSphere) {
  std::mt19937_64 rng(12);
  StiefelGeometry st(3, 1);
  SphereGeometry s(3);
  for (int k = 0; k < 10; ++k) {
    const Matrix x = unit_sphere_point(3, rng);
    const Matrix y = s.exp(x, random_tangent(s, x, 0.25 * (k + 1), rng));
    EXPECT_LT((st.log(x, y) - s.log(x, y)).norm(), 1e-8);
  }
}

TEST(StiefelLog, WarmStartGivesSameAnswer) {
  std::mt19937_64 rng(13);
  StiefelGeometry st(8, 2);
  const Matrix y = random_stiefel(8, 2, rng);
  const Matrix v = random_tangent(st, y, 1.0, rng);
  const Matrix target = st.exp(y, v);
  const Matrix warm = v + 1e-3 * random_tangent(st, y, 1.0, rng);
  EXPECT_LT((st.log(y, target, &warm) - v).norm(), 1e-7);
}

TEST(StiefelTangentBasis, MatchesProjectionSpan) {
  std::mt19937_64 rng(14);
  StiefelGeometry st(6, 2);
  const Matrix y = random_stiefel(6, 2, rng);
  const auto closed = st.tangent_basis(y);
  const auto generic = tangent_basis_by_projection(st, y);
  ASSERT_EQ(closed.size(), generic.size());
  // Each closed-form element lies in the span of the generic basis.
  for (const Matrix& b : closed) {
    Matrix rest = b;
    for (const Matrix& g : generic) rest -= (g.array() * b.array()).sum() * g;
    EXPECT_LT(rest.norm(), 1e-12);
  }
}

TEST(StiefelDims, Label) {
  EXPECT_EQ(StiefelGeometry(40, 12).dims(), "40x12");
  EXPECT_EQ(StiefelGeometry(4, 2).dimension(), 5);
}
