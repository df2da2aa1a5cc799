#pragma once

// Score-matrix CSV ingestion and the JSON formats for configuration and
// solutions. All JSON objects are emitted with sorted keys so identical
// inputs produce byte-identical files.

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctfteam/pipeline.hpp"

namespace ctfteam {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// CSV

struct ScoreTable {
  ScoreMatrix matrix;
  std::vector<std::string> warnings;
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}
}  // namespace detail

/// Parses `participant,<ROLE>,<ROLE>...` CSV text. Participant ids follow row
/// order; the first column is kept as the display label. Columns are
/// reordered to `roles` when given, otherwise kept in file order; role
/// columns outside `roles` and unknown columns are dropped with a warning.
inline ScoreTable parse_scores_csv(std::string_view text, const std::optional<RoleSet>& roles = std::nullopt) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto nl = text.find('\n', start);
      lines.push_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }
  std::size_t header_line = 0;
  while (header_line < lines.size() && detail::trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw ParseError(0, 0, "score file is empty");

  const auto header = detail::split_csv_line(lines[header_line]);
  if (header.front() != "participant") {
    throw ParseError(header_line + 1, 1, "first header cell must be 'participant'");
  }

  std::vector<std::string> warnings;
  std::map<Role, std::size_t> file_column;  // role -> csv column index
  std::vector<Role> file_order;
  for (std::size_t col = 1; col < header.size(); ++col) {
    const auto role = parse_role(header[col]);
    if (!role) {
      warnings.push_back("dropping unknown column '" + std::string(header[col]) + "'");
      continue;
    }
    if (file_column.count(*role)) {
      throw ParseError(header_line + 1, col + 1, "duplicate role column " + std::string(header[col]));
    }
    file_column[*role] = col;
    file_order.push_back(*role);
  }

  if (!roles && file_order.empty()) throw Error(ErrorCode::MissingRole, "score file has no role columns");
  const RoleSet role_set = roles ? *roles : RoleSet(file_order);
  std::vector<std::size_t> columns;
  for (Role role : role_set.roles()) {
    auto it = file_column.find(role);
    if (it == file_column.end()) {
      throw Error(ErrorCode::MissingRole, "score file lacks configured role column " + std::string(to_string(role)));
    }
    columns.push_back(it->second);
  }
  for (Role role : file_order) {
    if (!role_set.index_of(role)) {
      warnings.push_back("dropping role column " + std::string(to_string(role)) + " (not in configured roles)");
    }
  }

  std::vector<std::string> labels;
  std::vector<std::vector<Score>> rows;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (detail::trim(lines[li]).empty()) continue;
    const auto cells = detail::split_csv_line(lines[li]);
    if (cells.size() != header.size()) {
      throw ParseError(li + 1, 0, "line " + std::to_string(li + 1) + " has " + std::to_string(cells.size()) +
                                      " cells, header has " + std::to_string(header.size()));
    }
    labels.emplace_back(cells.front());
    std::vector<Score> row;
    for (std::size_t col : columns) {
      const auto cell = cells[col];
      Score value = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || value < 0) {
        throw ParseError(li + 1, col + 1, "line " + std::to_string(li + 1) + ", column " + std::to_string(col + 1) +
                                              ": expected a non-negative integer, got '" + std::string(cell) + "'");
      }
      row.push_back(value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(header_line + 2, 0, "score file has no participant rows");

  const int p = static_cast<int>(rows.size());
  return {ScoreMatrix(rows, role_set, Roster(p, std::move(labels))), std::move(warnings)};
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline ScoreTable read_scores_csv(const std::string& path, const std::optional<RoleSet>& roles = std::nullopt) {
  return parse_scores_csv(read_text_file(path), roles);
}

// ---------------------------------------------------------------------------
// JSON: config

constexpr std::string_view to_string(SamplingMode m) {
  return m == SamplingMode::Balanced ? "balanced" : "unconstrained";
}

inline SamplingMode parse_sampling_mode(std::string_view s) {
  if (s == "balanced") return SamplingMode::Balanced;
  if (s == "unconstrained") return SamplingMode::Unconstrained;
  throw Error(ErrorCode::InvalidConfig, "unknown sampling mode '" + std::string(s) + "'");
}

inline json to_json(const SolveConfig& c) {
  json j;
  j["roles"] = c.roles ? json(c.roles->codes()) : json(nullptr);
  j["n"] = c.n;
  j["method"] = std::string(to_string(c.method));
  j["seed"] = c.seed;
  j["rule3_strict"] = c.rule3_strict;
  j["coverage_strict"] = c.coverage_strict;
  j["exhaustive_bound"] = c.exhaustive_bound;
  j["brute_force_bound"] = c.brute_force_bound;
  j["include_labels"] = c.include_labels;
  j["mc"] = {{"mode", std::string(to_string(c.mc.mode))}, {"epsilon", c.mc.epsilon}, {"max_samples", c.mc.max_samples}};
  return j;
}

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
inline SolveConfig config_from_json(const json& j, SolveConfig base = {}) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "roles") {
        if (value.is_null()) {
          base.roles.reset();
        } else {
          const auto codes = value.get<std::vector<std::string>>();
          base.roles = RoleSet::parse(codes);
        }
      } else if (key == "n" || key == "teams") {
        base.n = value.get<int>();
      } else if (key == "method") {
        const auto name = value.get<std::string>();
        auto m = parse_method(name);
        if (!m) throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
        base.method = *m;
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "rule3_strict") {
        base.rule3_strict = value.get<bool>();
      } else if (key == "coverage_strict") {
        base.coverage_strict = value.get<bool>();
      } else if (key == "exhaustive_bound") {
        base.exhaustive_bound = value.get<int>();
      } else if (key == "brute_force_bound") {
        base.brute_force_bound = value.get<int>();
      } else if (key == "include_labels") {
        base.include_labels = value.get<bool>();
      } else if (key == "mc") {
        for (const auto& [mk, mv] : value.items()) {
          if (mk == "mode") {
            base.mc.mode = parse_sampling_mode(mv.get<std::string>());
          } else if (mk == "epsilon") {
            base.mc.epsilon = mv.get<double>();
          } else if (mk == "max_samples") {
            base.mc.max_samples = mv.get<std::uint64_t>();
          } else {
            throw Error(ErrorCode::InvalidConfig, "unknown mc config key '" + mk + "'");
          }
        }
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad config value: ") + e.what());
  }
  base.validate();
  return base;
}

inline SolveConfig read_config_json(const std::string& path, SolveConfig base = {}) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

// ---------------------------------------------------------------------------
// JSON: score matrix, assignments, solution

inline json to_json(const ScoreMatrix& s, bool include_labels = true) {
  json j;
  j["roles"] = s.role_set().codes();
  j["matrix"] = s.rows();
  if (include_labels && s.roster().has_labels()) j["labels"] = s.roster().labels();
  return j;
}

inline ScoreMatrix score_matrix_from_json(const json& j) {
  try {
    const auto roles = RoleSet::parse(j.at("roles").get<std::vector<std::string>>());
    const auto rows = j.at("matrix").get<std::vector<std::vector<Score>>>();
    if (rows.empty()) throw Error(ErrorCode::InvalidInput, "score matrix has no rows");
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return ScoreMatrix(rows, roles, Roster(static_cast<int>(rows.size()), std::move(labels)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad score matrix: ") + e.what());
  }
}

inline json to_json(const RoleAssignment& ra) {
  json roles = json::array();
  for (const auto& d : ra.designations) roles.push_back(to_string(d));
  return {{"roles", roles}, {"stage", std::string(to_string(ra.stage))}};
}

inline Stage parse_stage(std::string_view s) {
  if (s == "INITIAL") return Stage::Initial;
  if (s == "FINAL") return Stage::Final;
  throw Error(ErrorCode::InvalidInput, "unknown stage '" + std::string(s) + "'");
}

inline RoleAssignment role_assignment_from_json(const json& j) {
  RoleAssignment ra;
  for (const auto& code : j.at("roles")) ra.designations.push_back(parse_designation(code.get<std::string>()));
  ra.stage = parse_stage(j.at("stage").get<std::string>());
  return ra;
}

namespace detail {
inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
inline std::optional<double> optional_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}
}  // namespace detail

/// Canonical solution document.
inline json solution_to_json(const Solution& sol) {
  const auto& s = sol.scores;
  const bool labels = sol.config.include_labels && s.roster().has_labels();
  json j;
  j["config"] = to_json(sol.config);
  j["stage"] = std::string(to_string(sol.roles.stage));
  j["scores"] = to_json(s, labels);

  json participants = json::array();
  for (int id = 1; id <= s.p(); ++id) {
    json pj = {{"id", id}, {"team", sol.assembly.team_of(id)}};
    if (labels) pj["label"] = s.roster().label(id);
    participants.push_back(pj);
  }
  j["participants"] = participants;

  json teams = json::array();
  for (const auto& tr : sol.report.teams) {
    json members = json::array();
    for (int id : sol.assembly.members(tr.team)) {
      const auto& d = sol.roles.of(id);
      Score score = 0;
      if (d) {
        if (auto col = s.role_set().index_of(*d)) score = s.at(id, *col);
      }
      members.push_back({{"id", id}, {"role", to_string(d)}, {"score", score}});
    }
    teams.push_back({{"id", tr.team},
                     {"members", members},
                     {"capacity", tr.capacity},
                     {"team_score", tr.team_score},
                     {"sigma", tr.sigma},
                     {"capacity_vs_average_pct", tr.capacity_vs_average_pct}});
  }
  j["teams"] = teams;
  j["metrics"] = {{"capacity_pct_delta", detail::optional_number(sol.report.capacity_pct_delta)},
                  {"score_pct_delta", detail::optional_number(sol.report.score_pct_delta)},
                  {"total_capacity", s.total()},
                  {"total_team_score", [&] {
                     Score total = 0;
                     for (const auto& t : sol.report.teams) total += t.team_score;
                     return total;
                   }()}};
  return j;
}

inline std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

/// Rebuilds a Solution and checks every stored score against a fresh
/// recomputation.
inline Solution solution_from_json(const json& j) {
  try {
    auto config = config_from_json(j.at("config"));
    auto scores = score_matrix_from_json(j.at("scores"));
    const auto stage = parse_stage(j.at("stage").get<std::string>());

    const int p = scores.p();
    std::vector<int> team_of(static_cast<std::size_t>(p), 0);
    RoleAssignment ra{std::vector<Designation>(static_cast<std::size_t>(p), kHelper), stage};
    const auto& teams = j.at("teams");
    for (const auto& tj : teams) {
      const int t = tj.at("id").get<int>();
      for (const auto& mj : tj.at("members")) {
        const int id = mj.at("id").get<int>();
        if (id < 1 || id > p) throw Error(ErrorCode::InvalidId, "member id out of range");
        team_of[static_cast<std::size_t>(id - 1)] = t;
        ra.designations[static_cast<std::size_t>(id - 1)] = parse_designation(mj.at("role").get<std::string>());
      }
    }
    TeamAssembly assembly(std::move(team_of), static_cast<int>(teams.size()));
    auto report = make_report(scores, assembly, ra);

    for (const auto& tj : teams) {
      const int t = tj.at("id").get<int>();
      const auto& tr = report.teams.at(static_cast<std::size_t>(t - 1));
      if (tj.at("team_score").get<Score>() != tr.team_score || tj.at("capacity").get<Score>() != tr.capacity) {
        throw Error(ErrorCode::InconsistentInput, "stored scores for team " + std::to_string(t) +
                                                      " disagree with the score matrix");
      }
    }
    return Solution{std::move(config), std::move(scores), std::move(assembly), std::move(ra), std::move(report)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("bad solution document: ") + e.what());
  }
}

inline void write_solution_json(const Solution& sol, const std::string& path) {
  write_text_file(path, dump_canonical(solution_to_json(sol)));
}

inline Solution read_solution_json(const std::string& path) {
  try {
    return solution_from_json(json::parse(read_text_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON: comparison table

inline json to_json(const std::vector<MethodRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json teams = json::array();
    for (const auto& t : row.teams) {
      teams.push_back({{"team", t.team},
                       {"capacity", t.capacity},
                       {"sigma", t.sigma},
                       {"team_score", t.team_score},
                       {"capacity_vs_average_pct", t.capacity_vs_average_pct}});
    }
    out.push_back({{"method", std::string(to_string(row.method))},
                   {"teams", teams},
                   {"capacity_pct_delta", detail::optional_number(row.capacity_pct_delta)},
                   {"score_pct_delta", detail::optional_number(row.score_pct_delta)},
                   {"samples", row.samples}});
  }
  return out;
}

inline json to_json(const FeasibilityReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) violations.push_back({{"rule", v.rule}, {"detail", v.detail}});
  json coverage = json::object();
  for (const auto& [role, count] : r.per_role_coverage) coverage[std::string(to_string(role))] = count;
  return {{"feasible", r.feasible}, {"violations", violations}, {"per_role_coverage", coverage}};
}

}  // namespace ctfteam
