#pragma once

#include <random>
#include <vector>

#include "ctfteam/core_model.hpp"

namespace ctfteam::testing {

// Beta-test matrix, roles IN, DE, IM, CO.
inline ScoreMatrix beta_r1() {
  return ScoreMatrix({{23, 257, 83, 256}, {103, 60, 20, 290}, {10, 150, 61, 238}, {50, 141, 61, 0}},
                     RoleSet({Role::IN, Role::DE, Role::IM, Role::CO}));
}

// Same participants with AN replacing IN: roles DE, AN, IM, CO.
inline ScoreMatrix beta_r2() {
  return ScoreMatrix({{257, 97, 83, 256}, {60, 0, 20, 290}, {150, 10, 61, 238}, {141, 55, 61, 0}},
                     RoleSet({Role::DE, Role::AN, Role::IM, Role::CO}));
}

inline const char* beta_r1_csv() {
  return "participant,IN,DE,IM,CO\n"
         "p1,23,257,83,256\n"
         "p2,103,60,20,290\n"
         "p3,10,150,61,238\n"
         "p4,50,141,61,0\n";
}

// Beta participants with all six role columns. Selecting DE, AN, IM, CO
// gives beta_r2(); the TE column is filler.
inline const char* beta_six_role_csv() {
  return "participant,IN,DE,AN,IM,TE,CO\n"
         "p1,23,257,97,83,5,256\n"
         "p2,103,60,0,20,7,290\n"
         "p3,10,150,10,61,0,238\n"
         "p4,50,141,55,61,3,0\n";
}

// Synthetic 8 x 4 instance (IN, DE, IM, CO), all scores positive.
inline ScoreMatrix synthetic_p8() {
  return ScoreMatrix({{120, 45, 80, 10},
                      {30, 200, 15, 60},
                      {75, 90, 140, 25},
                      {10, 35, 60, 180},
                      {95, 20, 40, 70},
                      {50, 150, 30, 45},
                      {15, 60, 110, 90},
                      {85, 25, 55, 130}},
                     RoleSet({Role::IN, Role::DE, Role::IM, Role::CO}));
}

// Exhaustive reference values for synthetic_p8 computed by an independent
// enumeration over all 70 balanced splits (permutation search per team).
inline constexpr double kP8MeanTeamScore = 35330.0 / 70.0;
inline constexpr double kP8MeanCapacity = 1122.5;
inline constexpr double kP8MeanSigma = 26.195886563097808;
inline constexpr std::uint64_t kP8BestCode = 15;
inline constexpr Score kP8BestTotal = 1125;

inline RoleSet first_roles(int r) {
  std::vector<Role> roles(kAllRoles.begin(), kAllRoles.begin() + r);
  return RoleSet(std::move(roles));
}

inline ScoreMatrix random_matrix(std::mt19937_64& rng, int p, int r, Score lo, Score hi) {
  std::uniform_int_distribution<Score> dist(lo, hi);
  std::vector<std::vector<Score>> rows(static_cast<std::size_t>(p), std::vector<Score>(static_cast<std::size_t>(r)));
  for (auto& row : rows) {
    for (auto& v : row) v = dist(rng);
  }
  return ScoreMatrix(rows, first_roles(r));
}

}  // namespace ctfteam::testing
