#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ctfteam/assignment.hpp"
#include "fixtures.hpp"

namespace ctfteam {
namespace {

using testing::beta_r1;
using testing::beta_r2;

const TeamAssembly kOneTeam({1, 1, 1, 1}, 1);

TEST(BuildCostMatrix, AlphaTransform) {
  const auto c = build_cost_matrix(beta_r1(), kOneTeam, 1);
  EXPECT_EQ(c.k, 4);
  EXPECT_EQ(c.alpha, 290);
  EXPECT_EQ(c.at(1, 3), 0);         // p2, CO: 290 - 290
  EXPECT_EQ(c.at(0, 0), 290 - 23);  // p1, IN
  EXPECT_TRUE(c.is_forbidden(3, 3));  // p4 has 0 in CO
  EXPECT_GT(c.at(3, 3), static_cast<Score>(c.k) * c.alpha);
  EXPECT_EQ(std::count(c.forbidden.begin(), c.forbidden.end(), true), 1);
}

TEST(BuildCostMatrix, ConstantMatrix) {
  ScoreMatrix s({{9, 9}, {9, 9}}, RoleSet({Role::IN, Role::DE}));
  const auto c = build_cost_matrix(s, TeamAssembly({1, 1}, 1), 1);
  for (Score v : c.cost) EXPECT_EQ(v, 0);
}

TEST(BuildCostMatrix, PadsHelperColumns) {
  std::mt19937_64 rng(1);
  const auto s = testing::random_matrix(rng, 5, 4, 1, 20);
  const auto c = build_cost_matrix(s, TeamAssembly({1, 1, 1, 1, 1}, 1), 1);
  EXPECT_EQ(c.k, 5);
  EXPECT_FALSE(c.column_role[4].has_value());
  for (int row = 0; row < 5; ++row) EXPECT_EQ(c.at(row, 4), 0);
}

TEST(BuildCostMatrix, TeamSmallerThanRoles) {
  std::mt19937_64 rng(1);
  const auto s = testing::random_matrix(rng, 3, 4, 1, 20);
  try {
    build_cost_matrix(s, TeamAssembly({1, 1, 1}, 1), 1);
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.rule(), 1);
  }
}

TEST(HungarianAssign, BetaR1) {
  const auto result = hungarian_assign(build_cost_matrix(beta_r1(), kOneTeam, 1));
  EXPECT_EQ(result.score, 659);
  const std::vector<Designation> expected{Role::DE, Role::IN, Role::CO, Role::IM};
  EXPECT_EQ(result.designations, expected);
}

TEST(HungarianAssign, BetaR2) {
  const auto result = hungarian_assign(build_cost_matrix(beta_r2(), kOneTeam, 1));
  EXPECT_EQ(result.score, 663);
  // 257 + 290 + 61 + 55: p1 DE, p2 CO, p3 IM, p4 AN.
  const std::vector<Designation> expected{Role::DE, Role::CO, Role::IM, Role::AN};
  EXPECT_EQ(result.designations, expected);
}

TEST(HungarianAssign, ForcedDiagonal) {
  ScoreMatrix s({{5, 0}, {0, 7}}, RoleSet({Role::IN, Role::DE}));
  const auto result = hungarian_assign(build_cost_matrix(s, TeamAssembly({1, 1}, 1), 1));
  EXPECT_EQ(result.score, 12);
}

TEST(HungarianAssign, InfeasibleWhenZeroUnavoidable) {
  ScoreMatrix s({{5, 0}, {7, 0}}, RoleSet({Role::IN, Role::DE}));
  const TeamAssembly a({1, 1}, 1);
  try {
    hungarian_assign(build_cost_matrix(s, a, 1));
    FAIL();
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.rule(), 3);
  }
  // Relaxed: the zero-score holder is allowed and contributes nothing.
  const auto relaxed = hungarian_assign(build_cost_matrix(s, a, 1, {.relax_rule3 = true}));
  EXPECT_EQ(relaxed.score, 7);
}

TEST(HungarianAssign, TieBreakIsLexicographic) {
  // Every assignment scores the same; the identity mapping is smallest.
  ScoreMatrix s({{4, 4, 4}, {4, 4, 4}, {4, 4, 4}, {4, 4, 4}}, RoleSet({Role::IN, Role::DE, Role::AN}));
  const auto result = hungarian_assign(build_cost_matrix(s, TeamAssembly({1, 1, 1, 1}, 1), 1));
  const std::vector<Designation> expected{Role::IN, Role::DE, Role::AN, kHelper};
  EXPECT_EQ(result.designations, expected);
  EXPECT_EQ(result.score, 12);
}

TEST(BruteForceAssign, BetaValues) {
  EXPECT_EQ(brute_force_assign(beta_r1(), kOneTeam, 1).score, 659);
  EXPECT_EQ(brute_force_assign(beta_r2(), kOneTeam, 1).score, 663);
}

TEST(BruteForceAssign, BoundAndInfeasible) {
  std::mt19937_64 rng(2);
  const auto big = testing::random_matrix(rng, 10, 3, 1, 9);
  try {
    brute_force_assign(big, TeamAssembly(std::vector<int>(10, 1), 1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundExceeded);
  }
  ScoreMatrix s({{5, 0}, {7, 0}}, RoleSet({Role::IN, Role::DE}));
  EXPECT_THROW(brute_force_assign(s, TeamAssembly({1, 1}, 1), 1), InfeasibleError);
}

// Hungarian and exhaustive search agree on score and, with the shared tie
// rule, on the assignment itself.
TEST(AssignmentProperty, HungarianMatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 7)(rng);
    const int r = std::uniform_int_distribution<int>(1, std::min(m, 6))(rng);
    const auto s = testing::random_matrix(rng, m, r, 1, 60);
    const TeamAssembly a(std::vector<int>(static_cast<std::size_t>(m), 1), 1);
    const auto h = hungarian_assign(build_cost_matrix(s, a, 1));
    const auto b = brute_force_assign(s, a, 1);
    ASSERT_EQ(h.score, b.score) << "trial " << trial;
    EXPECT_EQ(h.designations, b.designations) << "trial " << trial;
    EXPECT_EQ(hungarian_score(build_cost_matrix(s, a, 1)), b.score);
  }
}

TEST(AssignmentProperty, AgreementWithZeroCells) {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int m = std::uniform_int_distribution<int>(2, 6)(rng);
    const int r = std::uniform_int_distribution<int>(1, std::min(m, 5))(rng);
    const auto s = testing::random_matrix(rng, m, r, 0, 4);
    const TeamAssembly a(std::vector<int>(static_cast<std::size_t>(m), 1), 1);
    bool bf_ok = true;
    Score bf_score = 0;
    try {
      bf_score = brute_force_assign(s, a, 1).score;
    } catch (const InfeasibleError&) {
      bf_ok = false;
    }
    if (bf_ok) {
      ++feasible;
      EXPECT_EQ(hungarian_assign(build_cost_matrix(s, a, 1)).score, bf_score);
    } else {
      EXPECT_THROW(hungarian_assign(build_cost_matrix(s, a, 1)), InfeasibleError);
    }
    // Relaxed problems always have a solution and must agree too.
    EXPECT_EQ(hungarian_assign(build_cost_matrix(s, a, 1, {.relax_rule3 = true})).score,
              brute_force_assign(s, a, 1, {.relax_rule3 = true}).score);
  }
  EXPECT_GT(feasible, 50);
}

// Adding a constant to every score shifts the optimum by r * constant and
// keeps the set of optimal assignments.
TEST(AssignmentProperty, MonotoneShift) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = std::uniform_int_distribution<int>(2, 6)(rng);
    const int r = std::uniform_int_distribution<int>(1, std::min(m, 5))(rng);
    const auto s = testing::random_matrix(rng, m, r, 1, 5);
    const Score shift = std::uniform_int_distribution<Score>(1, 40)(rng);
    auto rows = s.rows();
    for (auto& row : rows) {
      for (auto& v : row) v += shift;
    }
    const ScoreMatrix shifted(rows, s.role_set());
    const TeamAssembly a(std::vector<int>(static_cast<std::size_t>(m), 1), 1);

    const auto base = hungarian_assign(build_cost_matrix(s, a, 1));
    const auto moved = hungarian_assign(build_cost_matrix(shifted, a, 1));
    EXPECT_EQ(moved.score, base.score + r * shift);

    // Argmax sets coincide: enumerate every assignment of both problems.
    std::vector<int> slot(static_cast<std::size_t>(m), r);
    std::iota(slot.begin(), slot.begin() + r, 0);
    do {
      Score x = 0, y = 0;
      for (int i = 0; i < m; ++i) {
        const int col = slot[static_cast<std::size_t>(i)];
        if (col == r) continue;
        x += s.at(i + 1, col);
        y += shifted.at(i + 1, col);
      }
      EXPECT_EQ(x == base.score, y == moved.score);
    } while (std::next_permutation(slot.begin(), slot.end()));
  }
}

TEST(AssignRoles, RuleCompliantAndScoreIdentity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = std::uniform_int_distribution<int>(1, 5)(rng);
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    const int p = n * r + std::uniform_int_distribution<int>(0, 4)(rng);
    const auto s = testing::random_matrix(rng, p, r, 1, 100);
    std::vector<int> teams(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) teams[static_cast<std::size_t>(i)] = i % n + 1;
    const TeamAssembly a(teams, n);
    const auto result = assign_roles(s, a);
    EXPECT_TRUE(validate_role_assignment(s, a, result.roles).empty());
    for (int t = 1; t <= n; ++t) {
      EXPECT_EQ(result.team_scores[static_cast<std::size_t>(t - 1)], team_score(s, a, result.roles, t));
    }
  }
}

TEST(ApplySwap, BetaSwapAndIdentities) {
  const auto s = beta_r1();
  const RoleAssignment initial{{Role::DE, Role::IN, Role::CO, Role::IM}, Stage::Initial};
  const auto swapped = apply_swap(kOneTeam, initial, 1, 2);
  const std::vector<Designation> expected{Role::IN, Role::DE, Role::CO, Role::IM};
  EXPECT_EQ(swapped.designations, expected);
  EXPECT_EQ(team_score(s, kOneTeam, swapped, 1), 382);
  EXPECT_EQ(apply_swap(kOneTeam, initial, 3, 3), initial);
  EXPECT_EQ(apply_swap(kOneTeam, swapped, 1, 2), initial);
}

TEST(ApplySwap, HelpersAndCrossTeam) {
  ScoreMatrix s({{3, 4}, {5, 6}, {7, 8}, {1, 2}, {9, 9}}, RoleSet({Role::IN, Role::DE}));
  const TeamAssembly a({1, 1, 1, 1, 2}, 2);
  const RoleAssignment ra{{Role::IN, Role::DE, kHelper, kHelper, kHelper}, Stage::Initial};
  const auto same = apply_swap(a, ra, 3, 4);
  EXPECT_EQ(same, ra);
  EXPECT_EQ(team_score(s, a, same, 1), team_score(s, a, ra, 1));
  try {
    apply_swap(a, ra, 1, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSwap);
  }
}

TEST(ApplySwap, ZeroScoreRoleIsWarnedNotRejected) {
  const auto s = beta_r1();
  const RoleAssignment initial{{Role::DE, Role::IN, Role::CO, Role::IM}, Stage::Initial};
  const auto swapped = apply_swap(kOneTeam, initial, 3, 4);  // p4 takes CO (score 0)
  const auto warnings = rule3_warnings(s, kOneTeam, swapped, 1);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("rule 3"), std::string::npos);
}

TEST(ApplySwapProperty, Involution) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = std::uniform_int_distribution<int>(2, 10)(rng);
    std::vector<int> teams(static_cast<std::size_t>(p));
    for (auto& t : teams) t = std::uniform_int_distribution<int>(1, 2)(rng);
    teams[0] = 1;
    teams[1] = 2;
    const TeamAssembly a(teams, 2);
    RoleAssignment ra;
    for (int i = 0; i < p; ++i) {
      const int pick = std::uniform_int_distribution<int>(0, 6)(rng);
      ra.designations.push_back(pick == 6 ? kHelper : Designation(kAllRoles[static_cast<std::size_t>(pick)]));
    }
    const int i = std::uniform_int_distribution<int>(1, p)(rng);
    const auto mates = a.members(a.team_of(i));
    const int j = mates[std::uniform_int_distribution<std::size_t>(0, mates.size() - 1)(rng)];
    EXPECT_EQ(apply_swap(a, apply_swap(a, ra, i, j), i, j), ra);
  }
}

}  // namespace
}  // namespace ctfteam
