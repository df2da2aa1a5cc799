#pragma once

// Optimal within-team role assignment. Team rows are turned into a square
// minimisation problem (alpha - score, zero padding columns for helpers) and
// solved with the Hungarian method; an exhaustive permutation search serves
// as the reference oracle.

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctfteam/core_model.hpp"
#include "ctfteam/error.hpp"

namespace ctfteam {

struct AssignOptions {
  // Zero-score cells are hard-forbidden unless relaxed (rule 3).
  bool relax_rule3 = false;
  int brute_force_bound = 9;
};

/// Square k x k cost matrix for one team, k = max(team size, r).
struct CostMatrix {
  int k = 0;
  int filled_roles = 0;  // r
  Score alpha = 0;
  Score forbidden_cost = 0;
  bool rule3_strict = true;
  std::vector<Score> cost;                  // row-major
  std::vector<bool> forbidden;              // zero-score cells of role columns
  std::vector<int> row_participant;         // row -> participant id
  std::vector<std::optional<Role>> column_role;  // column -> role, nullopt = PAD

  Score at(int row, int col) const { return cost[static_cast<std::size_t>(row * k + col)]; }
  bool is_forbidden(int row, int col) const { return forbidden[static_cast<std::size_t>(row * k + col)]; }
};

struct TeamRoleResult {
  std::vector<int> members;               // ascending participant ids
  std::vector<Designation> designations;  // parallel to members
  Score score = 0;
};

struct AssignmentResult {
  RoleAssignment roles;
  std::vector<Score> team_scores;  // index t-1
};

inline CostMatrix build_cost_matrix(const ScoreMatrix& s, const TeamAssembly& a, int t,
                                    const AssignOptions& options = {}) {
  if (a.p() != s.p()) throw Error(ErrorCode::InconsistentInput, "assembly does not match score matrix");
  const auto members = a.members(t);
  if (members.empty()) throw Error(ErrorCode::InvalidInput, "team " + std::to_string(t) + " is empty");
  const int r = s.r();
  const int m = static_cast<int>(members.size());
  if (m < r) {
    throw InfeasibleError(1, "team " + std::to_string(t) + " has " + std::to_string(m) + " members for " +
                                 std::to_string(r) + " roles (rule 1: all roles need to be filled)");
  }

  CostMatrix c;
  c.k = m;
  c.filled_roles = r;
  c.rule3_strict = !options.relax_rule3;
  c.row_participant = members;
  for (int j = 0; j < c.k; ++j) {
    c.column_role.push_back(j < r ? std::optional<Role>(s.role_set()[j]) : std::nullopt);
  }
  for (int id : members) {
    for (Score v : s.row(id)) c.alpha = std::max(c.alpha, v);
  }
  c.forbidden_cost = static_cast<Score>(c.k) * c.alpha + 1;

  const auto cells = static_cast<std::size_t>(c.k) * static_cast<std::size_t>(c.k);
  c.cost.assign(cells, 0);
  c.forbidden.assign(cells, false);
  for (int row = 0; row < c.k; ++row) {
    for (int col = 0; col < r; ++col) {
      const Score v = s.at(members[static_cast<std::size_t>(row)], col);
      const auto cell = static_cast<std::size_t>(row * c.k + col);
      c.forbidden[cell] = (v == 0);
      c.cost[cell] = (v == 0 && c.rule3_strict) ? c.forbidden_cost : c.alpha - v;
    }
  }
  return c;
}

namespace detail {

// Shortest-augmenting-path Hungarian method with row/column potentials,
// O(k^3). Returns row -> column.
inline std::vector<int> hungarian_min(std::span<const Score> cost, int k) {
  constexpr Score kInf = std::numeric_limits<Score>::max() / 4;
  const auto n = static_cast<std::size_t>(k);
  std::vector<Score> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // column -> row, 1-based; 0 = free
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      Score delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Score cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

inline Score matching_cost(std::span<const Score> cost, int k, const std::vector<int>& row_to_col) {
  Score total = 0;
  for (int row = 0; row < k; ++row) total += cost[static_cast<std::size_t>(row * k + row_to_col[static_cast<std::size_t>(row)])];
  return total;
}

// Among all minimum-cost matchings, the one whose column sequence (rows in
// order) is lexicographically smallest. Columns >= `distinct_columns` are
// interchangeable padding and compare equal to each other.
inline std::vector<int> lexicographic_min_assignment(std::span<const Score> cost, int k, int distinct_columns) {
  const Score optimum = matching_cost(cost, k, hungarian_min(cost, k));
  const Score max_cell = *std::max_element(cost.begin(), cost.end());
  const Score block = static_cast<Score>(k) * (max_cell + 1) + 1;

  std::vector<Score> work(cost.begin(), cost.end());
  std::vector<int> fixed(static_cast<std::size_t>(k), -1);
  std::vector<char> column_taken(static_cast<std::size_t>(k), 0);

  auto force = [&](std::vector<Score>& m, int row, int col) {
    for (int j = 0; j < k; ++j) {
      if (j != col) m[static_cast<std::size_t>(row * k + j)] = block;
    }
    for (int i = 0; i < k; ++i) {
      if (i != row) m[static_cast<std::size_t>(i * k + col)] = block;
    }
  };

  for (int row = 0; row < k; ++row) {
    std::vector<int> candidates;
    for (int col = 0; col < std::min(distinct_columns, k); ++col) {
      if (!column_taken[static_cast<std::size_t>(col)]) candidates.push_back(col);
    }
    for (int col = distinct_columns; col < k; ++col) {
      if (!column_taken[static_cast<std::size_t>(col)]) {
        candidates.push_back(col);
        break;
      }
    }
    bool placed = false;
    for (int col : candidates) {
      auto trial = work;
      force(trial, row, col);
      if (matching_cost(trial, k, hungarian_min(trial, k)) == optimum) {
        work = std::move(trial);
        fixed[static_cast<std::size_t>(row)] = col;
        column_taken[static_cast<std::size_t>(col)] = 1;
        placed = true;
        break;
      }
    }
    if (!placed) throw Error(ErrorCode::InconsistentInput, "tie-break search lost the optimum");
  }
  return fixed;
}

}  // namespace detail

/// Maximum-score role assignment for one team. Among equally good
/// assignments, the lexicographically smallest designation sequence (by
/// participant id, then role order, HELPER last) is returned.
inline TeamRoleResult hungarian_assign(const CostMatrix& c) {
  const auto row_to_col = detail::lexicographic_min_assignment(c.cost, c.k, c.filled_roles);

  TeamRoleResult out;
  out.members = c.row_participant;
  Score total_cost = 0;
  for (int row = 0; row < c.k; ++row) {
    const int col = row_to_col[static_cast<std::size_t>(row)];
    if (c.rule3_strict && c.is_forbidden(row, col)) {
      throw InfeasibleError(3, "no role assignment avoids zero-score roles for participant " +
                                   std::to_string(c.row_participant[static_cast<std::size_t>(row)]) +
                                   " (rule 3: roles require positive CTF score)");
    }
    total_cost += c.at(row, col);
    out.designations.push_back(c.column_role[static_cast<std::size_t>(col)]);
  }
  // Each filled role column costs alpha - score and padding costs 0.
  out.score = static_cast<Score>(c.filled_roles) * c.alpha - total_cost;
  return out;
}

/// Optimal team score only; skips the tie-break refinement.
inline Score hungarian_score(const CostMatrix& c) {
  const auto row_to_col = detail::hungarian_min(c.cost, c.k);
  const Score total_cost = detail::matching_cost(c.cost, c.k, row_to_col);
  if (c.rule3_strict && total_cost >= c.forbidden_cost) {
    throw InfeasibleError(3, "no role assignment avoids zero-score roles (rule 3: roles require positive CTF score)");
  }
  return static_cast<Score>(c.filled_roles) * c.alpha - total_cost;
}

/// Exhaustive search over every injective role -> member mapping.
/// O(m!/(m-r)!) in the team size m; used as the oracle for hungarian_assign.
inline TeamRoleResult brute_force_assign(const ScoreMatrix& s, const TeamAssembly& a, int t,
                                         const AssignOptions& options = {}) {
  if (a.p() != s.p()) throw Error(ErrorCode::InconsistentInput, "assembly does not match score matrix");
  const auto members = a.members(t);
  const int m = static_cast<int>(members.size());
  const int r = s.r();
  if (m > options.brute_force_bound) {
    throw Error(ErrorCode::BoundExceeded, "team size " + std::to_string(m) + " exceeds brute-force bound " +
                                              std::to_string(options.brute_force_bound));
  }
  if (m < r) throw InfeasibleError(1, "team " + std::to_string(t) + " is smaller than the role count");

  // slot[i] = role column held by members[i]; value r means HELPER.
  std::vector<int> slot(static_cast<std::size_t>(m), r);
  std::iota(slot.begin(), slot.begin() + r, 0);

  std::optional<Score> best;
  std::vector<int> best_slot;
  do {
    Score sum = 0;
    bool legal = true;
    for (int i = 0; i < m; ++i) {
      const int col = slot[static_cast<std::size_t>(i)];
      if (col == r) continue;
      const Score v = s.at(members[static_cast<std::size_t>(i)], col);
      if (v == 0 && !options.relax_rule3) {
        legal = false;
        break;
      }
      sum += v;
    }
    if (legal && (!best || sum > *best)) {
      best = sum;
      best_slot = slot;
    }
  } while (std::next_permutation(slot.begin(), slot.end()));

  if (!best) {
    throw InfeasibleError(3, "team " + std::to_string(t) +
                                 " has no role assignment with positive scores (rule 3)");
  }
  TeamRoleResult out;
  out.members = members;
  out.score = *best;
  for (int col : best_slot) {
    out.designations.push_back(col == r ? kHelper : Designation(s.role_set()[col]));
  }
  return out;
}

/// Runs hungarian_assign for every team and stitches the per-team results
/// into one INITIAL role assignment.
inline AssignmentResult assign_roles(const ScoreMatrix& s, const TeamAssembly& a, const AssignOptions& options = {}) {
  if (a.p() != s.p()) throw Error(ErrorCode::InconsistentInput, "assembly does not match score matrix");
  AssignmentResult out;
  out.roles.designations.assign(static_cast<std::size_t>(s.p()), kHelper);
  out.roles.stage = Stage::Initial;
  for (int t = 1; t <= a.n(); ++t) {
    const auto team = hungarian_assign(build_cost_matrix(s, a, t, options));
    for (std::size_t i = 0; i < team.members.size(); ++i) {
      out.roles.designations[static_cast<std::size_t>(team.members[i] - 1)] = team.designations[i];
    }
    out.team_scores.push_back(team.score);
  }
  return out;
}

/// Exchanges the designations of two teammates. Rule-3 violations that
/// result are allowed; see rule3_warnings.
inline RoleAssignment apply_swap(const TeamAssembly& a, const RoleAssignment& ra, int i, int j) {
  if (static_cast<int>(ra.designations.size()) != a.p()) {
    throw Error(ErrorCode::InconsistentInput, "role assignment does not match assembly");
  }
  if (a.team_of(i) != a.team_of(j)) {
    throw Error(ErrorCode::InvalidSwap, "participants " + std::to_string(i) + " and " + std::to_string(j) +
                                            " are on different teams");
  }
  RoleAssignment out = ra;
  std::swap(out.designations[static_cast<std::size_t>(i - 1)], out.designations[static_cast<std::size_t>(j - 1)]);
  return out;
}

inline std::vector<std::string> rule3_warnings(const ScoreMatrix& s, const TeamAssembly& a, const RoleAssignment& ra,
                                               int t) {
  std::vector<std::string> out;
  for (int id : a.members(t)) {
    const auto& d = ra.of(id);
    if (!d) continue;
    auto col = s.role_set().index_of(*d);
    if (col && s.at(id, *col) == 0) {
      out.push_back("rule 3: participant " + std::to_string(id) + " has zero score in role " +
                    std::string(to_string(*d)));
    }
  }
  return out;
}

}  // namespace ctfteam
