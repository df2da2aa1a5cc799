#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ctfteam/assembly.hpp"
#include "fixtures.hpp"

namespace ctfteam {
namespace {

// One column so capacities equal the given values.
ScoreMatrix with_capacities(const std::vector<Score>& caps) {
  std::vector<std::vector<Score>> rows;
  for (Score c : caps) rows.push_back({c});
  return ScoreMatrix(rows, RoleSet({Role::IN}));
}

// Test-only binomial oracle.
std::uint64_t choose(int n, int k) {
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return out;
}

TEST(SnakeDraft, HandSimulatedOrder) {
  const auto a = snake_draft(with_capacities({10, 8, 6, 4}), 2);
  EXPECT_EQ(a.teams(), (std::vector<int>{1, 2, 2, 1}));
  const auto s = with_capacities({10, 8, 6, 4});
  EXPECT_EQ(team_capacity(s, a, 1), 14);
  EXPECT_EQ(team_capacity(s, a, 2), 14);
}

TEST(SnakeDraft, TiesByLowerId) {
  EXPECT_EQ(snake_draft(with_capacities({9, 9, 9, 9}), 2).teams(), (std::vector<int>{1, 2, 2, 1}));
}

TEST(SnakeDraft, SingleTeam) {
  EXPECT_EQ(snake_draft(testing::beta_r1(), 1).teams(), (std::vector<int>{1, 1, 1, 1}));
}

TEST(SnakeDraft, ThreeTeamsReverseEachRound) {
  // Capacities descend with id: picks go 1,2,3,3,2,1,1,2.
  const auto a = snake_draft(with_capacities({80, 70, 60, 50, 40, 30, 20, 10}), 3);
  EXPECT_EQ(a.teams(), (std::vector<int>{1, 2, 3, 3, 2, 1, 1, 2}));
}

TEST(SnakeDraft, SyntheticP8) {
  // Capacities 255,305,330,285,225,275,275,295; draft order 3,2,8,4,6,7,1,5.
  EXPECT_EQ(snake_draft(testing::synthetic_p8(), 2).teams(), (std::vector<int>{2, 2, 1, 1, 1, 1, 2, 2}));
}

TEST(SnakeDraft, TooManyTeams) {
  EXPECT_THROW(snake_draft(with_capacities({1, 2}), 3), InfeasibleError);
  EXPECT_THROW(snake_draft(with_capacities({1, 2}), 0), Error);
}

TEST(MaxCapacityTeam1, SortAndSplit) {
  const auto s = with_capacities({10, 8, 6, 4});
  const auto a = max_capacity_team1(s, 2);
  EXPECT_EQ(a.teams(), (std::vector<int>{1, 1, 2, 2}));
  EXPECT_EQ(team_capacity(s, a, 1), 18);
  EXPECT_EQ(team_capacity(s, a, 2), 10);
  EXPECT_EQ(max_capacity_team1(with_capacities({5, 5, 5, 5, 5}), 2).teams(), (std::vector<int>{1, 1, 1, 2, 2}));
  try {
    max_capacity_team1(s, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
}

// Team sizes within one of each other, everyone placed once, and the draft
// never more lopsided than the max-capacity split.
TEST(SnakeDraftProperty, SizesAndImbalance) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = std::uniform_int_distribution<int>(2, 14)(rng);
    const int n = std::uniform_int_distribution<int>(1, std::min(p, 4))(rng);
    const auto s = testing::random_matrix(rng, p, 5, 0, 300);
    const auto a = snake_draft(s, n);
    ASSERT_EQ(a.p(), p);
    for (int t = 1; t <= n; ++t) {
      EXPECT_GE(a.team_size(t), p / n);
      EXPECT_LE(a.team_size(t), (p + n - 1) / n);
    }
    if (n == 2) {
      const auto m = max_capacity_team1(s, 2);
      const auto snake_gap = std::llabs(team_capacity(s, a, 1) - team_capacity(s, a, 2));
      const auto max_gap = std::llabs(team_capacity(s, m, 1) - team_capacity(s, m, 2));
      EXPECT_LE(snake_gap, max_gap);
    }
  }
}

TEST(SnakeDraftProperty, RowPermutationKeepsCapacityMultiset) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = std::uniform_int_distribution<int>(2, 12)(rng);
    const auto s = testing::random_matrix(rng, p, 3, 0, 1000);
    auto rows = s.rows();
    std::shuffle(rows.begin(), rows.end(), rng);
    const ScoreMatrix permuted(rows, s.role_set());
    auto caps = [](const ScoreMatrix& m) {
      const auto a = snake_draft(m, 2);
      std::multiset<Score> out{team_capacity(m, a, 1), team_capacity(m, a, 2)};
      return out;
    };
    // Only guaranteed without ties in capacity.
    auto c = capacities(s);
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) continue;
    EXPECT_EQ(caps(s), caps(permuted));
  }
}

TEST(Encoding, WorkedExample992) {
  const auto a = decode_assembly({992, 10});
  EXPECT_EQ(a.teams(), (std::vector<int>{2, 2, 2, 2, 2, 1, 1, 1, 1, 1}));
  EXPECT_EQ(to_bit_string({992, 10}), "1111100000");
  EXPECT_EQ(encode_assembly(a).code, 992u);
}

TEST(Encoding, ZeroAndErrors) {
  const auto a = decode_assembly({0, 5});
  EXPECT_EQ(a.teams(), (std::vector<int>(5, 1)));
  EXPECT_FALSE(a.is_complete());
  try {
    decode_assembly({32, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCode);
  }
  try {
    encode_assembly(TeamAssembly({1, 2, 3}, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unsupported);
  }
}

TEST(EncodingProperty, RoundTrip) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = std::uniform_int_distribution<int>(1, 40)(rng);
    std::vector<int> teams(static_cast<std::size_t>(p));
    for (auto& t : teams) t = std::uniform_int_distribution<int>(1, 2)(rng);
    const TeamAssembly a(teams, 2);
    EXPECT_EQ(decode_assembly(encode_assembly(a)), a);
    const std::uint64_t code = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << p) - 1)(rng);
    EXPECT_EQ(encode_assembly(decode_assembly({code, p})).code, code);
  }
}

TEST(EnumerateBalanced, CountsMatchBinomialOracle) {
  for (int p = 1; p <= 16; ++p) {
    std::uint64_t count = 0;
    std::uint64_t prev = 0;
    bool first = true;
    for (auto it = enumerate_balanced(p).begin(); it != enumerate_balanced(p).end(); ++it) {
      if (!first) {
        EXPECT_LT(prev, it.code());
      }
      prev = it.code();
      first = false;
      ++count;
    }
    const std::uint64_t expected = p % 2 == 0 ? choose(p, p / 2) : choose(p, p / 2) + choose(p, (p + 1) / 2);
    EXPECT_EQ(count, expected) << "p = " << p;
  }
}

TEST(EnumerateBalanced, SmallCases) {
  std::vector<std::vector<int>> p4;
  for (const auto& a : enumerate_balanced(4)) p4.push_back(a.teams());
  EXPECT_EQ(p4.size(), 6u);
  EXPECT_EQ(p4.front(), (std::vector<int>{1, 1, 2, 2}));  // code 3
  EXPECT_EQ(p4.back(), (std::vector<int>{2, 2, 1, 1}));   // code 12

  std::vector<std::vector<int>> p1;
  for (const auto& a : enumerate_balanced(1)) p1.push_back(a.teams());
  EXPECT_EQ(p1, (std::vector<std::vector<int>>{{1}, {2}}));

  std::uint64_t p10 = 0;
  for (const auto& a : enumerate_balanced(10)) {
    EXPECT_EQ(a.team_size(2), 5);
    ++p10;
  }
  EXPECT_EQ(p10, 252u);
}

TEST(EnumerateBalanced, BoundExceeded) {
  try {
    enumerate_balanced(21);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BoundExceeded);
  }
  EXPECT_NO_THROW(enumerate_balanced(21, 22));
}

TEST(AveragedBalancedStats, MatchesIndependentEnumeration) {
  const auto stats = averaged_balanced_stats(testing::synthetic_p8());
  EXPECT_EQ(stats.assemblies, 70u);
  EXPECT_EQ(stats.scored_assemblies, 70u);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_DOUBLE_EQ(stats.mean_capacity[t], testing::kP8MeanCapacity);
    EXPECT_NEAR(stats.mean_score[t], testing::kP8MeanTeamScore, 1e-9);
    EXPECT_NEAR(stats.mean_sigma[t], testing::kP8MeanSigma, 1e-9);
  }
}

TEST(AveragedBalancedStats, ThreadCountDoesNotChangeResult) {
  const auto s = testing::synthetic_p8();
  ExhaustiveOptions one_thread;
  one_thread.threads = 1;
  ExhaustiveOptions seven_threads;
  seven_threads.threads = 7;
  const auto one = averaged_balanced_stats(s, one_thread);
  const auto many = averaged_balanced_stats(s, seven_threads);
  EXPECT_EQ(one.mean_score, many.mean_score);
  EXPECT_EQ(one.mean_sigma, many.mean_sigma);
}

TEST(AveragedBalancedStatsProperty, MeanCapacityIsHalfTotal) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = std::uniform_int_distribution<int>(4, 11)(rng);
    const int r = std::uniform_int_distribution<int>(1, p / 2)(rng);
    const auto s = testing::random_matrix(rng, p, r, 1, 500);
    const auto stats = averaged_balanced_stats(s);
    const double half = static_cast<double>(s.total()) / 2.0;
    EXPECT_NEAR(stats.mean_capacity[0], half, 1e-9 * half);
    EXPECT_NEAR(stats.mean_capacity[1], half, 1e-9 * half);
  }
}

TEST(ExhaustiveBestAssembly, MatchesIndependentEnumeration) {
  const auto s = testing::synthetic_p8();
  const auto a = exhaustive_best_assembly(s);
  EXPECT_EQ(encode_assembly(a).code, testing::kP8BestCode);
  const auto ev = evaluate_two_teams(s, a);
  EXPECT_EQ(ev.score[0] + ev.score[1], testing::kP8BestTotal);
}

TEST(RandomAssemblyMc, BalancedMeanNearExhaustive) {
  MonteCarloOptions opt;
  opt.seed = 1;
  const auto res = random_assembly_mc(testing::synthetic_p8(), opt);
  EXPECT_TRUE(res.converged);
  EXPECT_GE(res.samples, 1000u);
  EXPECT_NEAR(res.mean_score, testing::kP8MeanTeamScore, 0.01 * testing::kP8MeanTeamScore);
  EXPECT_GE(res.standard_error, 0.0);
}

TEST(RandomAssemblyMc, SeedDeterminism) {
  MonteCarloOptions opt;
  opt.seed = 99;
  opt.max_samples = 5000;
  const auto s = testing::synthetic_p8();
  EXPECT_EQ(random_assembly_mc(s, opt), random_assembly_mc(s, opt));
  opt.mode = SamplingMode::Unconstrained;
  EXPECT_EQ(random_assembly_mc(s, opt), random_assembly_mc(s, opt));
}

TEST(RandomAssemblyMc, ConstantStatisticConvergesAfterFirstWindow) {
  ScoreMatrix s(std::vector<std::vector<Score>>(6, {5, 7}), RoleSet({Role::IN, Role::DE}));
  MonteCarloOptions opt;
  const auto res = random_assembly_mc(s, opt);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.samples, opt.window);
  EXPECT_EQ(res.standard_error, 0.0);
  EXPECT_EQ(res.mean_team_scores[0], 12.0);
}

TEST(RandomAssemblyMc, UnconstrainedRejectsUnassignableDraws) {
  MonteCarloOptions opt;
  opt.mode = SamplingMode::Unconstrained;
  opt.max_samples = 3000;
  opt.seed = 5;
  const auto res = random_assembly_mc(testing::synthetic_p8(), opt);
  EXPECT_GT(res.rejected, 0u);  // teams smaller than 4 cannot fill the roles
  EXPECT_GT(res.samples, 0u);
}

TEST(RandomAssemblyMc, InvalidConfig) {
  MonteCarloOptions opt;
  opt.max_samples = 0;
  try {
    random_assembly_mc(testing::synthetic_p8(), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
}

TEST(RandomAssemblySampler, BalancedDrawsAreBalanced) {
  RandomAssemblySampler sampler(9, SamplingMode::Balanced, 3);
  std::map<int, int> sizes;
  for (int k = 0; k < 2000; ++k) {
    const auto a = sampler.next();
    ++sizes[a.team_size(2)];
  }
  EXPECT_EQ(sizes.size(), 2u);
  EXPECT_GT(sizes[4], 800);
  EXPECT_GT(sizes[5], 800);
}

}  // namespace
}  // namespace ctfteam
