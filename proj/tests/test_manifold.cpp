#include <gtest/gtest.h>

#include "geoschwarz/sphere.hpp"
#include "geoschwarz/stiefel.hpp"
#include "test_util.hpp"

using namespace geoschwarz;
using namespace testutil;

TEST(Inner, ZeroVector) {
  SphereGeometry s(3);
  EXPECT_EQ(s.inner(e(3, 0), Matrix::Zero(3, 1), Matrix::Zero(3, 1)), 0.0);
}

TEST(Inner, OrthogonalCoordinates) {
  SphereGeometry s(3);
  EXPECT_EQ(s.inner(e(3, 0), e(3, 1), e(3, 2)), 0.0);
}

TEST(Inner, MatchesFrobeniusDot) {
  std::mt19937_64 rng(3);
  StiefelGeometry st(6, 2);
  const Matrix y = qf(gaussian(6, 2, rng));
  for (int k = 0; k < 10; ++k) {
    const Matrix u = st.project(y, gaussian(6, 2, rng));
    const Matrix v = st.project(y, gaussian(6, 2, rng));
    EXPECT_NEAR(st.inner(y, u, u), (u.array() * u.array()).sum(), 1e-12);
    EXPECT_NEAR(st.inner(y, u, v), (u.array() * v.array()).sum(), 1e-12);
  }
}

TEST(Inner, RejectsNonTangentOrWrongShape) {
  SphereGeometry s(3);
  EXPECT_THROW(s.inner(e(3, 0), e(3, 0), e(3, 1)), std::invalid_argument);
  EXPECT_THROW(s.inner(e(3, 0), Matrix::Zero(4, 1), e(3, 1)), std::invalid_argument);
}

TEST(Dist, SamePointIsZero) {
  SphereGeometry s(4);
  StiefelGeometry st(5, 2);
  std::mt19937_64 rng(1);
  EXPECT_EQ(dist(s, e(4, 2), e(4, 2)), 0.0);
  const Matrix y = qf(gaussian(5, 2, rng));
  EXPECT_EQ(dist(st, y, y), 0.0);
}

TEST(Dist, SphereQuarterTurn) {
  SphereGeometry s(3);
  EXPECT_NEAR(dist(s, e(3, 0), e(3, 1)), kPi / 2, 1e-15);
}

TEST(Dist, StiefelRoundTrip) {
  std::mt19937_64 rng(11);
  StiefelGeometry st(7, 3);
  const Matrix y = qf(gaussian(7, 3, rng));
  const Matrix u = random_tangent(st, y, 1.0, rng);
  EXPECT_NEAR(dist(st, y, st.exp(y, 0.3 * u)), 0.3, 1e-6);
}

TEST(Midpoint, SamePoint) {
  SphereGeometry s(3);
  EXPECT_EQ(midpoint(s, e(3, 1), e(3, 1)), e(3, 1));
}

TEST(Midpoint, SphereSymmetric) {
  SphereGeometry s(3);
  const Matrix expected = (e(3, 0) + e(3, 1)) / std::sqrt(2.0);
  EXPECT_LT((midpoint(s, e(3, 0), e(3, 1)) - expected).norm(), 1e-15);
}

TEST(Midpoint, StiefelHalfParameter) {
  std::mt19937_64 rng(5);
  StiefelGeometry st(8, 2);
  const Matrix y = qf(gaussian(8, 2, rng));
  const Matrix w = random_tangent(st, y, 1.2, rng);
  EXPECT_LT((midpoint(st, y, st.exp(y, w)) - st.exp(y, 0.5 * w)).norm(), 1e-8);
}

TEST(Midpoint, StoresLogarithm) {
  SphereGeometry s(3);
  Matrix log;
  midpoint(s, e(3, 0), e(3, 1), nullptr, &log);
  EXPECT_LT((log - kPi / 2 * e(3, 1)).norm(), 1e-15);
}

TEST(GeodesicPoint, Endpoints) {
  SphereGeometry s(5);
  std::mt19937_64 rng(2);
  const Matrix p = unit_sphere_point(5, rng), q = unit_sphere_point(5, rng);
  EXPECT_EQ(geodesic_point(s, p, q, 0.0), p);
  EXPECT_LT((geodesic_point(s, p, q, 1.0) - q).norm(), 1e-10);
}

TEST(GeodesicPoint, ThirdOfQuarterCircle) {
  SphereGeometry s(3);
  const Matrix expected = std::cos(kPi / 6) * e(3, 0) + std::sin(kPi / 6) * e(3, 1);
  EXPECT_LT((geodesic_point(s, e(3, 0), e(3, 1), 1.0 / 3.0) - expected).norm(), 1e-15);
}

TEST(GeodesicPoint, RejectsParameterOutsideUnitInterval) {
  SphereGeometry s(3);
  EXPECT_THROW(geodesic_point(s, e(3, 0), e(3, 1), -0.1), std::invalid_argument);
  EXPECT_THROW(geodesic_point(s, e(3, 0), e(3, 1), 1.5), std::invalid_argument);
}

TEST(Geodesic, LengthAndEvaluation) {
  SphereGeometry s(3);
  const Geodesic g = connecting_geodesic(s, e(3, 0), e(3, 2));
  EXPECT_NEAR(g.length(), kPi / 2, 1e-15);
  EXPECT_LT((g.at(s, 1.0) - e(3, 2)).norm(), 1e-15);
}

// Property: along a sphere geodesic, distances add up.
TEST(GeodesicProperty, DistanceAdditivity) {
  SphereGeometry s(6);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const Matrix p = unit_sphere_point(6, rng), q = unit_sphere_point(6, rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double t = unif(rng);
    const Matrix c = geodesic_point(s, p, q, t);
    EXPECT_NEAR(dist(s, p, c) + dist(s, c, q), dist(s, p, q), 1e-12);
  }
}

TEST(TangentBasis, SphereNorthPole) {
  SphereGeometry s(3);
  const auto basis = s.tangent_basis(e(3, 0));
  ASSERT_EQ(basis.size(), 2u);
  for (const Matrix& b : basis) EXPECT_NEAR(std::abs(b(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(basis[0](1, 0)) + std::abs(basis[1](2, 0)), 2.0, 1e-15);
}

TEST(TangentBasis, StiefelDimension) {
  std::mt19937_64 rng(4);
  StiefelGeometry st(4, 2);
  const Matrix y = qf(gaussian(4, 2, rng));
  EXPECT_EQ(st.tangent_basis(y).size(), 5u);
  EXPECT_EQ(tangent_basis_by_projection(st, y).size(), 5u);
}

// Property: every basis is orthonormal, tangent, and spans the same space as
// the generic projection construction.
TEST(TangentBasis, OrthonormalAndTangent) {
  std::mt19937_64 rng(8);
  std::vector<std::pair<std::unique_ptr<Manifold>, Matrix>> cases;
  cases.emplace_back(std::make_unique<SphereGeometry>(7), unit_sphere_point(7, rng));
  for (auto [n, p] : {std::pair{4, 2}, std::pair{6, 3}, std::pair{5, 5}})
    cases.emplace_back(std::make_unique<StiefelGeometry>(n, p),
                       qf(gaussian(n, p, rng)));
  for (const auto& [m, x] : cases) {
    for (const auto& basis : {m->tangent_basis(x), tangent_basis_by_projection(*m, x)}) {
      ASSERT_EQ(Eigen::Index(basis.size()), m->dimension());
      Matrix gram(basis.size(), basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        EXPECT_LT(m->tangency_residual(x, basis[i]), 1e-12);
        for (std::size_t j = 0; j < basis.size(); ++j)
          gram(i, j) = (basis[i].array() * basis[j].array()).sum();
      }
      EXPECT_LT((gram - Matrix::Identity(gram.rows(), gram.cols())).norm(), 1e-12);
    }
    // A random tangent is reproduced by its coordinates in the basis.
    const Matrix v = m->project(x, gaussian(m->rows(), m->cols(), rng));
    Matrix rebuilt = Matrix::Zero(v.rows(), v.cols());
    for (const Matrix& b : m->tangent_basis(x))
      rebuilt += (b.array() * v.array()).sum() * b;
    EXPECT_LT((rebuilt - v).norm(), 1e-12);
  }
}
