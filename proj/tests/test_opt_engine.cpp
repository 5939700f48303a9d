#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "vml/opt_engine.hpp"

using namespace vml;

TEST(SolveLp, TextbookMaximum) {
  // max x + y, x + 2y <= 4, 3x + y <= 6, x, y >= 0: optimum (1.6, 1.2).
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.add({1.0, 2.0}, Relation::LessEq, 4.0);
  lp.add({3.0, 1.0}, Relation::LessEq, 6.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LPStatus::Optimal);
  EXPECT_NEAR(sol.value, 2.8, 1e-12);
  EXPECT_NEAR(sol.point[0], 1.6, 1e-12);
  EXPECT_NEAR(sol.point[1], 1.2, 1e-12);
}

TEST(SolveLp, EqualityAndGreaterRows) {
  // max -x - y, x + y = 3, x - y >= 1, y >= 0.5.
  LinearProgram lp(2);
  lp.objective = {-1.0, -1.0};
  lp.add({1.0, 1.0}, Relation::Equal, 3.0);
  lp.add({1.0, -1.0}, Relation::GreaterEq, 1.0);
  lp.lower[1] = 0.5;
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LPStatus::Optimal);
  EXPECT_NEAR(sol.value, -3.0, 1e-12);
  EXPECT_NEAR(sol.point[0] + sol.point[1], 3.0, 1e-12);
  EXPECT_GE(sol.point[1], 0.5 - 1e-12);
}

TEST(SolveLp, FreeAndBoundedVariables) {
  // max x subject to -3 <= x <= 2 and x free otherwise; then min over free x.
  LinearProgram lp(1);
  lp.objective = {1.0};
  lp.lower[0] = -3.0;
  lp.upper[0] = 2.0;
  EXPECT_NEAR(solve_lp(lp).value, 2.0, 1e-12);
  lp.objective = {-1.0};
  EXPECT_NEAR(solve_lp(lp).value, 3.0, 1e-12);

  LinearProgram free(1);
  free.set_free(0);
  free.objective = {-1.0};
  free.add({1.0}, Relation::GreaterEq, -7.5);
  const auto sol = solve_lp(free);
  ASSERT_EQ(sol.status, LPStatus::Optimal);
  EXPECT_NEAR(sol.point[0], -7.5, 1e-12);
}

TEST(SolveLp, InfeasibleAndUnbounded) {
  LinearProgram bad(1);
  bad.objective = {1.0};
  bad.add({1.0}, Relation::LessEq, 1.0);
  bad.add({1.0}, Relation::GreaterEq, 2.0);
  EXPECT_EQ(solve_lp(bad).status, LPStatus::Infeasible);

  LinearProgram open(2);
  open.objective = {1.0, 0.0};
  open.add({-1.0, 1.0}, Relation::LessEq, 1.0);
  EXPECT_EQ(solve_lp(open).status, LPStatus::Unbounded);

  LinearProgram crossed(1);
  crossed.lower[0] = 2.0;
  crossed.upper[0] = 1.0;
  EXPECT_EQ(solve_lp(crossed).status, LPStatus::Infeasible);
}

TEST(SolveLp, DegenerateRowsTerminate) {
  // Three constraints through the optimum (1, 1).
  LinearProgram lp(2);
  lp.objective = {1.0, 1.0};
  lp.add({1.0, 0.0}, Relation::LessEq, 1.0);
  lp.add({0.0, 1.0}, Relation::LessEq, 1.0);
  lp.add({1.0, 1.0}, Relation::LessEq, 2.0);
  lp.add({1.0, 1.0}, Relation::Equal, 2.0);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LPStatus::Optimal);
  EXPECT_NEAR(sol.value, 2.0, 1e-12);
}

// Random bounded 2-variable LPs against vertex enumeration.
TEST(SolveLp, MatchesVertexEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::array<double, 3>> rows{{1.0, 0.0, 5.0}, {-1.0, 0.0, 5.0},
                                            {0.0, 1.0, 5.0}, {0.0, -1.0, 5.0}};
    const std::size_t extra = 1 + rng.below(5);
    for (std::size_t k = 0; k < extra; ++k) {
      rows.push_back({rng.gaussian(), rng.gaussian(), rng.uniform(0.1, 3.0)});
    }
    const std::array<double, 2> c{rng.gaussian(), rng.gaussian()};
    LinearProgram lp(2);
    lp.set_free(0);
    lp.set_free(1);
    lp.objective = {c[0], c[1]};
    for (const auto& r : rows) lp.add({r[0], r[1]}, Relation::LessEq, r[2]);
    const auto sol = solve_lp(lp);
    ASSERT_EQ(sol.status, LPStatus::Optimal);
    EXPECT_NEAR(sol.value, oracle::lp2_vertex_max(rows, c), 1e-9);
  }
}

TEST(EnumerateSigns, VisitsEveryPatternOnce) {
  for (std::size_t k = 1; k <= 10; ++k) {
    std::set<SignVector> seen;
    SignVector previous;
    enumerate_signs(k, [&](const SignVector& eps, std::ptrdiff_t flipped) {
      EXPECT_EQ(eps[0], 1);
      if (flipped < 0) {
        EXPECT_TRUE(seen.empty());
      } else {
        std::size_t diff = 0;
        for (std::size_t i = 0; i < k; ++i) diff += eps[i] != previous[i];
        EXPECT_EQ(diff, 1u);
        EXPECT_NE(eps[static_cast<std::size_t>(flipped)], previous[static_cast<std::size_t>(flipped)]);
      }
      seen.insert(eps);
      previous = eps;
    });
    EXPECT_EQ(seen.size(), std::size_t{1} << (k - 1));
  }
}

TEST(EnumerateSigns, EdgeCases) {
  int calls = 0;
  enumerate_signs(0, [&](const SignVector& eps, std::ptrdiff_t) {
    EXPECT_TRUE(eps.empty());
    ++calls;
  });
  EXPECT_EQ(calls, 1);
  EXPECT_THROW(enumerate_signs(25, [](const SignVector&, std::ptrdiff_t) {}), CapacityExceeded);
}

TEST(HillClimb, SeparableObjectiveReachesOptimum) {
  const std::vector<double> w{0.5, -2.0, 1.0, -0.25, 3.0};
  auto f = [&](const SignVector& eps) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += eps[i] * w[i];
    return s;
  };
  const auto r = hill_climb(w.size(), f, 1, 0);
  EXPECT_DOUBLE_EQ(r.value, 6.75);
  EXPECT_EQ(r.pattern, (SignVector{1, -1, 1, -1, 1}));
}

TEST(HillClimb, Deterministic) {
  Rng rng(4);
  std::vector<double> q(36);
  for (double& v : q) v = rng.gaussian();
  auto f = [&](const SignVector& eps) {
    double s = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) s += q[i * 6 + j] * eps[i] * eps[j];
    }
    return s;
  };
  const auto a = hill_climb(6, f, 5, 99);
  const auto b = hill_climb(6, f, 5, 99);
  EXPECT_EQ(a.pattern, b.pattern);
  EXPECT_EQ(a.value, b.value);
  EXPECT_THROW(hill_climb(6, f, 0, 1), InvalidArgument);
}
