#pragma once

// Value types shared by every stage of team construction: the roster, the
// role universe, the participant x role score matrix, team assemblies and
// role assignments, plus the capacity / team-score aggregates over them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctfteam/error.hpp"

namespace ctfteam {

using Score = std::int64_t;

enum class Role : std::uint8_t { IN, DE, AN, IM, TE, CO };

inline constexpr std::array<Role, 6> kAllRoles = {Role::IN, Role::DE, Role::AN,
                                                  Role::IM, Role::TE, Role::CO};

constexpr std::string_view to_string(Role role) {
  switch (role) {
    case Role::IN: return "IN";
    case Role::DE: return "DE";
    case Role::AN: return "AN";
    case Role::IM: return "IM";
    case Role::TE: return "TE";
    case Role::CO: return "CO";
  }
  return "??";
}

constexpr std::optional<Role> parse_role(std::string_view code) {
  for (Role role : kAllRoles) {
    if (to_string(role) == code) return role;
  }
  return std::nullopt;
}

/// Participants are identified by 1-based ids 1..p. Display labels are
/// optional and never needed by the algorithms.
class Roster {
 public:
  explicit Roster(int p, std::vector<std::string> labels = {})
      : p_(p), labels_(std::move(labels)) {
    if (p_ < 1) throw Error(ErrorCode::InvalidInput, "roster needs at least one participant");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != p_) {
      throw Error(ErrorCode::InvalidInput, "label count does not match participant count");
    }
  }

  int size() const noexcept { return p_; }
  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  bool contains(int id) const noexcept { return id >= 1 && id <= p_; }

  std::string label(int id) const {
    if (!contains(id)) throw Error(ErrorCode::InvalidId, "participant id " + std::to_string(id) + " out of range");
    return has_labels() ? labels_[id - 1] : std::to_string(id);
  }

  bool operator==(const Roster&) const = default;

 private:
  int p_;
  std::vector<std::string> labels_;
};

/// Ordered subset of the six functional roles; the order fixes the column
/// order of the score matrix.
class RoleSet {
 public:
  explicit RoleSet(std::vector<Role> roles) : roles_(std::move(roles)) {
    if (roles_.empty() || roles_.size() > kAllRoles.size()) {
      throw Error(ErrorCode::InvalidConfig, "role set must hold between 1 and 6 roles");
    }
    for (std::size_t i = 0; i < roles_.size(); ++i) {
      for (std::size_t j = i + 1; j < roles_.size(); ++j) {
        if (roles_[i] == roles_[j]) {
          throw Error(ErrorCode::InvalidConfig,
                      "duplicate role " + std::string(to_string(roles_[i])));
        }
      }
    }
  }

  static RoleSet parse(std::span<const std::string> codes) {
    std::vector<Role> roles;
    for (const auto& code : codes) {
      auto role = parse_role(code);
      if (!role) throw Error(ErrorCode::InvalidConfig, "unknown role code '" + code + "'");
      roles.push_back(*role);
    }
    return RoleSet(std::move(roles));
  }

  int size() const noexcept { return static_cast<int>(roles_.size()); }
  const std::vector<Role>& roles() const noexcept { return roles_; }
  Role operator[](int index) const { return roles_.at(static_cast<std::size_t>(index)); }

  std::optional<int> index_of(Role role) const noexcept {
    auto it = std::find(roles_.begin(), roles_.end(), role);
    if (it == roles_.end()) return std::nullopt;
    return static_cast<int>(it - roles_.begin());
  }

  std::vector<std::string> codes() const {
    std::vector<std::string> out;
    for (Role role : roles_) out.emplace_back(to_string(role));
    return out;
  }

  bool operator==(const RoleSet&) const = default;

 private:
  std::vector<Role> roles_;
};

/// p x r matrix of non-negative CTF points; rows are participants, columns
/// follow the RoleSet order.
class ScoreMatrix {
 public:
  ScoreMatrix(std::vector<std::vector<Score>> rows, RoleSet role_set)
      : ScoreMatrix(rows, std::move(role_set), Roster(static_cast<int>(rows.size()))) {}

  ScoreMatrix(const std::vector<std::vector<Score>>& rows, RoleSet role_set, Roster roster)
      : roster_(std::move(roster)), role_set_(std::move(role_set)) {
    if (static_cast<int>(rows.size()) != roster_.size()) {
      throw Error(ErrorCode::InvalidInput, "row count does not match roster size");
    }
    const auto r = static_cast<std::size_t>(role_set_.size());
    cells_.reserve(rows.size() * r);
    for (const auto& row : rows) {
      if (row.size() != r) {
        throw Error(ErrorCode::InvalidInput, "row width does not match role count");
      }
      for (Score v : row) {
        if (v < 0) throw Error(ErrorCode::InvalidInput, "scores must be non-negative");
        cells_.push_back(v);
      }
    }
  }

  int p() const noexcept { return roster_.size(); }
  int r() const noexcept { return role_set_.size(); }
  const Roster& roster() const noexcept { return roster_; }
  const RoleSet& role_set() const noexcept { return role_set_; }

  /// Score of participant `id` (1-based) in role column `role_index` (0-based).
  Score at(int id, int role_index) const {
    check_id(id);
    if (role_index < 0 || role_index >= r()) {
      throw Error(ErrorCode::InvalidId, "role index " + std::to_string(role_index) + " out of range");
    }
    return cells_[static_cast<std::size_t>((id - 1) * r() + role_index)];
  }

  std::span<const Score> row(int id) const {
    check_id(id);
    return std::span<const Score>(cells_).subspan(static_cast<std::size_t>((id - 1) * r()),
                                                  static_cast<std::size_t>(r()));
  }

  std::vector<std::vector<Score>> rows() const {
    std::vector<std::vector<Score>> out;
    for (int id = 1; id <= p(); ++id) {
      auto rw = row(id);
      out.emplace_back(rw.begin(), rw.end());
    }
    return out;
  }

  Score total() const noexcept { return std::accumulate(cells_.begin(), cells_.end(), Score{0}); }

  bool operator==(const ScoreMatrix&) const = default;

 private:
  void check_id(int id) const {
    if (!roster_.contains(id)) {
      throw Error(ErrorCode::InvalidId, "participant id " + std::to_string(id) + " out of range");
    }
  }

  Roster roster_;
  RoleSet role_set_;
  std::vector<Score> cells_;
};

/// Team of each participant: element i-1 is the team (1..n) of participant i.
class TeamAssembly {
 public:
  TeamAssembly(std::vector<int> teams, int n) : teams_(std::move(teams)), n_(n) {
    if (n_ < 1) throw Error(ErrorCode::InvalidInput, "team count must be at least 1");
    if (teams_.empty()) throw Error(ErrorCode::InvalidInput, "assembly must cover at least one participant");
    for (int t : teams_) {
      if (t < 1 || t > n_) {
        throw Error(ErrorCode::InvalidId, "team id " + std::to_string(t) + " outside 1.." + std::to_string(n_));
      }
    }
  }

  int p() const noexcept { return static_cast<int>(teams_.size()); }
  int n() const noexcept { return n_; }
  const std::vector<int>& teams() const noexcept { return teams_; }

  int team_of(int id) const {
    if (id < 1 || id > p()) throw Error(ErrorCode::InvalidId, "participant id " + std::to_string(id) + " out of range");
    return teams_[static_cast<std::size_t>(id - 1)];
  }

  /// Member ids of team t in ascending order.
  std::vector<int> members(int t) const {
    check_team(t);
    std::vector<int> out;
    for (int i = 0; i < p(); ++i) {
      if (teams_[static_cast<std::size_t>(i)] == t) out.push_back(i + 1);
    }
    return out;
  }

  int team_size(int t) const {
    check_team(t);
    return static_cast<int>(std::count(teams_.begin(), teams_.end(), t));
  }

  /// False when some team id in 1..n has no members. Encoded two-team
  /// assemblies (e.g. code 0) may legitimately be incomplete.
  bool is_complete() const {
    for (int t = 1; t <= n_; ++t) {
      if (std::find(teams_.begin(), teams_.end(), t) == teams_.end()) return false;
    }
    return true;
  }

  void check_team(int t) const {
    if (t < 1 || t > n_) throw Error(ErrorCode::InvalidId, "team id " + std::to_string(t) + " out of range");
  }

  bool operator==(const TeamAssembly&) const = default;

 private:
  std::vector<int> teams_;
  int n_;
};

/// A participant's role, or HELPER (std::nullopt) when they back up
/// teammates without owning a role.
using Designation = std::optional<Role>;
inline constexpr Designation kHelper = std::nullopt;

inline std::string to_string(const Designation& d) {
  return d ? std::string(to_string(*d)) : std::string("HELPER");
}

inline Designation parse_designation(std::string_view code) {
  if (code == "HELPER") return kHelper;
  auto role = parse_role(code);
  if (!role) throw Error(ErrorCode::InvalidInput, "unknown designation '" + std::string(code) + "'");
  return role;
}

enum class Stage { Initial, Final };

constexpr std::string_view to_string(Stage stage) {
  return stage == Stage::Initial ? "INITIAL" : "FINAL";
}

struct RoleAssignment {
  std::vector<Designation> designations;
  Stage stage = Stage::Initial;

  const Designation& of(int id) const {
    if (id < 1 || id > static_cast<int>(designations.size())) {
      throw Error(ErrorCode::InvalidId, "participant id " + std::to_string(id) + " out of range");
    }
    return designations[static_cast<std::size_t>(id - 1)];
  }

  bool operator==(const RoleAssignment&) const = default;
};

struct RuleViolation {
  int rule = 0;
  std::string detail;

  bool operator==(const RuleViolation&) const = default;
};

inline Score participant_capacity(const ScoreMatrix& s, int id) {
  auto row = s.row(id);
  return std::accumulate(row.begin(), row.end(), Score{0});
}

inline std::vector<Score> capacities(const ScoreMatrix& s) {
  std::vector<Score> out;
  out.reserve(static_cast<std::size_t>(s.p()));
  for (int id = 1; id <= s.p(); ++id) out.push_back(participant_capacity(s, id));
  return out;
}

namespace detail {
inline void require_same_p(const ScoreMatrix& s, const TeamAssembly& a) {
  if (a.p() != s.p()) {
    throw Error(ErrorCode::InconsistentInput, "assembly length " + std::to_string(a.p()) +
                                                  " does not match participant count " + std::to_string(s.p()));
  }
}
}  // namespace detail

inline Score team_capacity(const ScoreMatrix& s, const TeamAssembly& a, int t) {
  detail::require_same_p(s, a);
  Score sum = 0;
  for (int id : a.members(t)) sum += participant_capacity(s, id);
  return sum;
}

/// Sum of each member's score in their designated role; HELPER counts 0.
inline Score team_score(const ScoreMatrix& s, const TeamAssembly& a, const RoleAssignment& ra, int t) {
  detail::require_same_p(s, a);
  if (static_cast<int>(ra.designations.size()) != s.p()) {
    throw Error(ErrorCode::InconsistentInput, "role assignment length does not match participant count");
  }
  Score sum = 0;
  for (int id : a.members(t)) {
    const auto& d = ra.of(id);
    if (!d) continue;
    auto col = s.role_set().index_of(*d);
    if (!col) {
      throw Error(ErrorCode::InconsistentInput, "participant " + std::to_string(id) + " holds role " +
                                                    std::string(to_string(*d)) + " outside the role set");
    }
    sum += s.at(id, *col);
  }
  return sum;
}

/// Checks rules 1-3 for every team of a role assignment. Human-adjusted
/// assignments may carry rule-3 violations on purpose; callers decide.
inline std::vector<RuleViolation> validate_role_assignment(const ScoreMatrix& s, const TeamAssembly& a,
                                                           const RoleAssignment& ra) {
  detail::require_same_p(s, a);
  if (static_cast<int>(ra.designations.size()) != s.p()) {
    throw Error(ErrorCode::InconsistentInput, "role assignment length does not match participant count");
  }
  std::vector<RuleViolation> out;
  for (int t = 1; t <= a.n(); ++t) {
    std::vector<int> holders(static_cast<std::size_t>(s.r()), 0);
    const auto members = a.members(t);
    for (int id : members) {
      const auto& d = ra.of(id);
      if (!d) continue;
      auto col = s.role_set().index_of(*d);
      if (!col) {
        out.push_back({2, "participant " + std::to_string(id) + " holds role outside the role set"});
        continue;
      }
      ++holders[static_cast<std::size_t>(*col)];
      if (s.at(id, *col) == 0) {
        out.push_back({3, "participant " + std::to_string(id) + " has zero score in assigned role " +
                              std::string(to_string(*d))});
      }
    }
    for (int j = 0; j < s.r(); ++j) {
      const int count = holders[static_cast<std::size_t>(j)];
      const std::string role(to_string(s.role_set()[j]));
      if (count > 1) {
        out.push_back({2, "team " + std::to_string(t) + " has " + std::to_string(count) + " holders of " + role});
      } else if (count == 0 && static_cast<int>(members.size()) >= s.r()) {
        out.push_back({1, "team " + std::to_string(t) + " leaves role " + role + " unfilled"});
      }
    }
  }
  return out;
}

}  // namespace ctfteam
