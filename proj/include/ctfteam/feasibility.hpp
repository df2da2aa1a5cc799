#pragma once

// Counting conditions under which an instance can form n complete teams,
// plus an exact per-team matching test.

#include <map>
#include <string>
#include <vector>

#include "ctfteam/assignment.hpp"
#include "ctfteam/core_model.hpp"

namespace ctfteam {

struct FeasibilityReport {
  bool feasible = true;
  std::vector<RuleViolation> violations;
  std::map<Role, int> per_role_coverage;  // participants with a positive score
};

/// n <= floor(p / r): every team can seat one member per role.
constexpr bool check_team_count(int p, int r, int n) {
  return p >= 1 && r >= 1 && n >= 1 && n <= p / r;
}

struct CoverageOptions {
  // Require strictly more than n capable participants per role instead of
  // at least n.
  bool strict = false;
};

inline FeasibilityReport check_role_coverage(const ScoreMatrix& s, int n, const CoverageOptions& options = {}) {
  FeasibilityReport report;
  if (!check_team_count(s.p(), s.r(), n)) {
    report.violations.push_back(
        {1, "team count " + std::to_string(n) + " violates n <= floor(p/r) = floor(" + std::to_string(s.p()) + "/" +
                std::to_string(s.r()) + ") = " + std::to_string(s.p() / s.r())});
  }
  for (int j = 0; j < s.r(); ++j) {
    int holders = 0;
    for (int id = 1; id <= s.p(); ++id) {
      if (s.at(id, j) > 0) ++holders;
    }
    const Role role = s.role_set()[j];
    report.per_role_coverage[role] = holders;
    const bool ok = options.strict ? holders > n : holders >= n;
    if (!ok) {
      report.violations.push_back({3, "role " + std::string(to_string(role)) + " has " + std::to_string(holders) +
                                          " participants with a positive score, need " +
                                          (options.strict ? "more than " : "at least ") + std::to_string(n)});
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

/// True iff every team of `a` admits a perfect role matching that uses only
/// positive-score cells.
inline bool check_exact_feasibility(const ScoreMatrix& s, const TeamAssembly& a) {
  if (a.p() != s.p()) throw Error(ErrorCode::InconsistentInput, "assembly does not match score matrix");
  for (int t = 1; t <= a.n(); ++t) {
    if (a.team_size(t) < s.r()) return false;
    try {
      hungarian_score(build_cost_matrix(s, a, t));
    } catch (const InfeasibleError&) {
      return false;
    }
  }
  return true;
}

}  // namespace ctfteam
