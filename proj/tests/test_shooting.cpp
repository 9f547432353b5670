#include <gtest/gtest.h>

#include "geoschwarz/shooting.hpp"
#include "geoschwarz/sphere.hpp"
#include "geoschwarz/stiefel.hpp"
#include "test_util.hpp"

using namespace geoschwarz;
using namespace testutil;

TEST(Shooting, SamePoint) {
  SphereGeometry s(4);
  const ShootingResult r = shoot_log(s, e(4, 0), e(4, 0));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iters, 1);
  EXPECT_EQ(r.v.norm(), 0.0);
}

TEST(Shooting, SphereMatchesClosedForm) {
  std::mt19937_64 rng(1);
  SphereGeometry s(10);
  const Matrix p = unit_sphere_point(10, rng);
  const Matrix u = random_tangent(s, p, 1.0, rng);
  const Matrix q = s.exp(p, 0.5 * u);
  const ShootingResult r = shoot_log(s, p, q);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.v - 0.5 * u).norm(), 1e-8);

  // Closed form written out: theta * normalized projection of q.
  const double theta = std::acos(p.col(0).dot(q.col(0)));
  Matrix w = q - p * p.col(0).dot(q.col(0));
  EXPECT_LT((r.v - theta * w / w.norm()).norm(), 1e-8);
}

TEST(Shooting, StiefelRoundTrip) {
  std::mt19937_64 rng(2);
  StiefelGeometry st(20, 4);
  const Matrix p = qf(gaussian(20, 4, rng));
  const Matrix u = random_tangent(st, p, 1.0, rng);
  const Matrix q = st.exp(p, 0.6 * u);
  const ShootingResult r = shoot_log(st, p, q);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((st.exp(p, r.v) - q).norm(), 1e-9);
  EXPECT_LE(r.iters, 15);
  EXPECT_LT(st.tangency_residual(p, r.v), 1e-12);
}

TEST(Shooting, ObserverAndTrace) {
  std::mt19937_64 rng(3);
  SphereGeometry s(5);
  const Matrix p = unit_sphere_point(5, rng);
  const Matrix q = s.exp(p, random_tangent(s, p, 2.0, rng));
  std::vector<int> seen;
  const ShootingResult r = shoot_log(
      s, p, q, std::nullopt, {}, [&](int iter, const Matrix&, const Matrix&) {
        seen.push_back(iter);
      });
  ASSERT_EQ(int(seen.size()), r.iters + 1);
  for (int i = 0; i <= r.iters; ++i) EXPECT_EQ(seen[i], i);
  ASSERT_EQ(r.trace.size(), seen.size());
  // Accepted iterates never increase the residual.
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    EXPECT_LE(r.trace[i], r.trace[i - 1]);
  EXPECT_LE(r.trace.back(), 1e-9);
}

TEST(Shooting, NonConvergenceCarriesTrace) {
  std::mt19937_64 rng(4);
  StiefelGeometry st(10, 3);
  const Matrix p = qf(gaussian(10, 3, rng));
  const Matrix q = st.exp(p, random_tangent(st, p, 1.5, rng));
  ShootingConfig cfg;
  cfg.max_iters = 1;
  cfg.tol = 1e-14;
  try {
    shoot_log(st, p, q, std::nullopt, cfg);
    FAIL() << "expected ShootingDidNotConverge";
  } catch (const ShootingDidNotConverge& e) {
    EXPECT_GE(e.trace.size(), 1u);
  }
}

TEST(Shooting, WarmStartConvergesFaster) {
  std::mt19937_64 rng(5);
  StiefelGeometry st(12, 3);
  const Matrix p = qf(gaussian(12, 3, rng));
  const Matrix v = random_tangent(st, p, 1.5, rng);
  const Matrix q = st.exp(p, v);
  const ShootingResult cold = shoot_log(st, p, q);
  const ShootingResult warm =
      shoot_log(st, p, q, Matrix(v + 1e-4 * random_tangent(st, p, 1.0, rng)));
  EXPECT_LE(warm.iters, cold.iters);
  EXPECT_LT((warm.v - v).norm(), 1e-7);
}
