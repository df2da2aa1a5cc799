#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ctfteam/core_model.hpp"

namespace ctfteam {

/// Population standard deviation (divide by team size) of the member
/// capacities of team t.
inline double within_team_sigma(const ScoreMatrix& s, const TeamAssembly& a, int t) {
  const auto members = a.members(t);
  if (members.empty()) throw Error(ErrorCode::InvalidInput, "team " + std::to_string(t) + " is empty");
  double mean = 0.0;
  for (int id : members) mean += static_cast<double>(participant_capacity(s, id));
  mean /= static_cast<double>(members.size());
  double ss = 0.0;
  for (int id : members) {
    const double d = static_cast<double>(participant_capacity(s, id)) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(members.size()));
}

/// (x / ref - 1) in percent.
inline double pct_delta(double x, double ref) {
  if (!(ref > 0.0)) throw Error(ErrorCode::InvalidInput, "percentage reference must be positive");
  return (x / ref - 1.0) * 100.0;
}

/// Renders a percentage with `significant` significant digits and an
/// explicit sign, e.g. "+24.090%".
inline std::string format_pct(double pct, int significant = 5) {
  int decimals = significant - 1;
  if (pct != 0.0) {
    const int magnitude = static_cast<int>(std::floor(std::log10(std::fabs(pct))));
    decimals = std::max(0, significant - 1 - magnitude);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.*f%%", decimals, pct);
  return buf;
}

struct TeamReport {
  int team = 0;
  Score capacity = 0;
  Score team_score = 0;
  double sigma = 0.0;
  // Capacity relative to the averaged/balanced capacity total / n.
  double capacity_vs_average_pct = 0.0;

  bool operator==(const TeamReport&) const = default;
};

struct AssemblyReport {
  std::vector<TeamReport> teams;
  // Team 1 relative to team 2 for two teams; largest over smallest otherwise.
  // Empty when there is a single team or the reference is zero.
  std::optional<double> capacity_pct_delta;
  std::optional<double> score_pct_delta;

  bool operator==(const AssemblyReport&) const = default;
};

namespace detail {
inline std::optional<double> cross_team_delta(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  double num = values[0], den = values[1];
  if (values.size() > 2) {
    num = *std::max_element(values.begin(), values.end());
    den = *std::min_element(values.begin(), values.end());
  }
  if (!(den > 0.0)) return std::nullopt;
  return pct_delta(num, den);
}
}  // namespace detail

inline AssemblyReport make_report(const ScoreMatrix& s, const TeamAssembly& a, const RoleAssignment& ra) {
  AssemblyReport report;
  const double average = static_cast<double>(s.total()) / a.n();
  std::vector<double> caps, scores;
  for (int t = 1; t <= a.n(); ++t) {
    TeamReport team;
    team.team = t;
    team.capacity = team_capacity(s, a, t);
    team.team_score = team_score(s, a, ra, t);
    team.sigma = a.team_size(t) > 0 ? within_team_sigma(s, a, t) : 0.0;
    team.capacity_vs_average_pct = average > 0.0 ? pct_delta(static_cast<double>(team.capacity), average) : 0.0;
    caps.push_back(static_cast<double>(team.capacity));
    scores.push_back(static_cast<double>(team.team_score));
    report.teams.push_back(team);
  }
  report.capacity_pct_delta = detail::cross_team_delta(caps);
  report.score_pct_delta = detail::cross_team_delta(scores);
  return report;
}

}  // namespace ctfteam
