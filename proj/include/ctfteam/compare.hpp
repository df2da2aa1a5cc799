#pragma once

// Side-by-side comparison of assembly methods, each followed by optimal role
// assignment, plus text and CSV renderings of the resulting table.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctfteam/assembly.hpp"
#include "ctfteam/assignment.hpp"
#include "ctfteam/metrics.hpp"

namespace ctfteam {

enum class Method { Draft, MaxCap, Random, Exhaustive, ExhaustiveAverage };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Draft: return "draft";
    case Method::MaxCap: return "maxcap";
    case Method::Random: return "random";
    case Method::Exhaustive: return "exhaustive";
    case Method::ExhaustiveAverage: return "exhaustive-average";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::Draft, Method::MaxCap, Method::Random, Method::Exhaustive, Method::ExhaustiveAverage}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

struct CompareOptions {
  int n = 2;
  MonteCarloOptions mc;
  ExhaustiveOptions exhaustive;
  AssignOptions assign;
};

struct MethodTeamRow {
  int team = 0;
  double capacity = 0.0;
  double sigma = 0.0;
  double team_score = 0.0;
  double capacity_vs_average_pct = 0.0;

  bool operator==(const MethodTeamRow&) const = default;
};

struct MethodRow {
  Method method = Method::Draft;
  std::vector<MethodTeamRow> teams;
  std::optional<double> capacity_pct_delta;
  std::optional<double> score_pct_delta;
  std::uint64_t samples = 0;  // assemblies averaged (random / exhaustive-average), 1 otherwise

  bool operator==(const MethodRow&) const = default;
};

namespace detail {
inline MethodRow finish_row(Method method, const ScoreMatrix& s, int n, std::vector<MethodTeamRow> teams,
                            std::uint64_t samples) {
  MethodRow row;
  row.method = method;
  const double average = static_cast<double>(s.total()) / n;
  std::vector<double> caps, scores;
  for (auto& t : teams) {
    t.capacity_vs_average_pct = average > 0.0 ? pct_delta(t.capacity, average) : 0.0;
    caps.push_back(t.capacity);
    scores.push_back(t.team_score);
  }
  row.teams = std::move(teams);
  row.capacity_pct_delta = cross_team_delta(caps);
  row.score_pct_delta = cross_team_delta(scores);
  row.samples = samples;
  return row;
}

inline MethodRow row_from_assembly(Method method, const ScoreMatrix& s, const TeamAssembly& a,
                                   const AssignOptions& options) {
  const auto assigned = assign_roles(s, a, options);
  const auto report = make_report(s, a, assigned.roles);
  std::vector<MethodTeamRow> teams;
  for (const auto& t : report.teams) {
    teams.push_back({t.team, static_cast<double>(t.capacity), t.sigma, static_cast<double>(t.team_score), 0.0});
  }
  return finish_row(method, s, a.n(), std::move(teams), 1);
}
}  // namespace detail

/// One row per method. `random` averages Monte Carlo samples of balanced
/// assemblies; `exhaustive-average` averages every balanced assembly;
/// `exhaustive` is the single best balanced assembly.
inline std::vector<MethodRow> compare_methods(const ScoreMatrix& s, const std::vector<Method>& methods,
                                              const CompareOptions& options = {}) {
  std::vector<MethodRow> rows;
  for (Method m : methods) {
    if (m != Method::Draft && options.n != 2) {
      throw Error(ErrorCode::Unsupported, std::string(to_string(m)) + " is defined for two teams only");
    }
    switch (m) {
      case Method::Draft:
        rows.push_back(detail::row_from_assembly(m, s, snake_draft(s, options.n), options.assign));
        break;
      case Method::MaxCap:
        rows.push_back(detail::row_from_assembly(m, s, max_capacity_team1(s, 2), options.assign));
        break;
      case Method::Exhaustive:
        rows.push_back(detail::row_from_assembly(
            m, s, exhaustive_best_assembly(s, options.exhaustive.bound, options.assign), options.assign));
        break;
      case Method::Random: {
        auto mc = options.mc;
        mc.assign = options.assign;
        const auto res = random_assembly_mc(s, mc);
        std::vector<MethodTeamRow> teams;
        for (std::size_t t = 0; t < 2; ++t) {
          teams.push_back({static_cast<int>(t + 1), res.mean_capacities[t], res.mean_sigmas[t],
                           res.mean_team_scores[t], 0.0});
        }
        rows.push_back(detail::finish_row(m, s, 2, std::move(teams), res.samples));
        break;
      }
      case Method::ExhaustiveAverage: {
        auto ex = options.exhaustive;
        ex.assign = options.assign;
        const auto stats = averaged_balanced_stats(s, ex);
        std::vector<MethodTeamRow> teams;
        for (std::size_t t = 0; t < 2; ++t) {
          teams.push_back({static_cast<int>(t + 1), stats.mean_capacity[t], stats.mean_sigma[t],
                           stats.mean_score[t], 0.0});
        }
        rows.push_back(detail::finish_row(m, s, 2, std::move(teams), stats.assemblies));
        break;
      }
    }
  }
  return rows;
}

namespace detail {
inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
inline std::string opt_pct(const std::optional<double>& v) { return v ? format_pct(*v) : std::string("-"); }
}  // namespace detail

/// Aligned plain-text table, one line per (method, team).
inline std::string render_table(const std::vector<MethodRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %4s %12s %10s %12s %12s\n", "method", "team", "capacity", "sigma",
                "team_score", "cap_vs_avg");
  out << line;
  for (const auto& row : rows) {
    for (const auto& t : row.teams) {
      std::snprintf(line, sizeof line, "%-20s %4d %12s %10s %12s %12s\n", std::string(to_string(row.method)).c_str(),
                    t.team, detail::fixed2(t.capacity).c_str(), detail::fixed2(t.sigma).c_str(),
                    detail::fixed2(t.team_score).c_str(), format_pct(t.capacity_vs_average_pct).c_str());
      out << line;
    }
    std::snprintf(line, sizeof line, "%-20s %4s capacity delta %s, score delta %s\n", "", "",
                  detail::opt_pct(row.capacity_pct_delta).c_str(), detail::opt_pct(row.score_pct_delta).c_str());
    out << line;
  }
  return out.str();
}

/// Long-format CSV suitable for plotting.
inline std::string render_csv(const std::vector<MethodRow>& rows) {
  std::ostringstream out;
  out << "method,team,capacity,sigma,team_score,capacity_vs_average_pct,samples\n";
  char line[256];
  for (const auto& row : rows) {
    for (const auto& t : row.teams) {
      std::snprintf(line, sizeof line, "%s,%d,%.6f,%.6f,%.6f,%.6f,%llu\n", std::string(to_string(row.method)).c_str(),
                    t.team, t.capacity, t.sigma, t.team_score, t.capacity_vs_average_pct,
                    static_cast<unsigned long long>(row.samples));
      out << line;
    }
  }
  return out.str();
}

}  // namespace ctfteam
