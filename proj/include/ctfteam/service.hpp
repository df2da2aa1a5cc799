#pragma once

// Session store behind the what-if API. A session holds the initial solve
// and an append-only log of role swaps; the current assignment is always
// the initial one with the log replayed in order. Each session persists as
// one JSON document in the data directory.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ctfteam/io.hpp"
#include "ctfteam/pipeline.hpp"

namespace ctfteam {

/// Failure with the HTTP status the API maps it to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what, std::optional<int> rule = std::nullopt)
      : std::runtime_error(what), status_(status), rule_(rule) {}

  int status() const noexcept { return status_; }
  std::optional<int> rule() const noexcept { return rule_; }

 private:
  int status_;
  std::optional<int> rule_;
};

struct SwapEvent {
  int i = 0;
  int j = 0;
  std::string timestamp;
  Score resulting_team_score = 0;

  bool operator==(const SwapEvent&) const = default;
};

struct Session {
  std::string id;
  Solution initial;  // s'' and everything it was derived from
  RoleAssignment current;
  std::vector<SwapEvent> swap_log;
  std::optional<RoleAssignment> finalized;  // s'''
  std::uint64_t version = 0;

  const ScoreMatrix& scores() const { return initial.scores; }
  const TeamAssembly& assembly() const { return initial.assembly; }
};

/// Replays the swap log on the initial assignment.
inline RoleAssignment replay(const Session& s) {
  RoleAssignment ra = s.initial.roles;
  for (const auto& ev : s.swap_log) ra = apply_swap(s.assembly(), ra, ev.i, ev.j);
  return ra;
}

/// The solution document for a role assignment of this session.
inline json session_solution(const Session& s, const RoleAssignment& ra) {
  Solution view{s.initial.config, s.initial.scores, s.initial.assembly, ra,
                make_report(s.initial.scores, s.initial.assembly, ra)};
  return solution_to_json(view);
}

inline json session_to_json(const Session& s) {
  json log = json::array();
  for (const auto& ev : s.swap_log) {
    log.push_back({{"i", ev.i}, {"j", ev.j}, {"timestamp", ev.timestamp},
                   {"resulting_team_score", ev.resulting_team_score}});
  }
  return {{"id", s.id},
          {"version", s.version},
          {"initial", solution_to_json(s.initial)},
          {"current", to_json(s.current)},
          {"swap_log", log},
          {"finalized", s.finalized ? to_json(*s.finalized) : json(nullptr)}};
}

/// Loads a persisted session and verifies that replaying the swap log
/// reproduces the stored current assignment and every logged score.
inline Session session_from_json(const json& j) {
  Session s{j.at("id").get<std::string>(), solution_from_json(j.at("initial")), {}, {}, std::nullopt,
            j.at("version").get<std::uint64_t>()};
  for (const auto& ev : j.at("swap_log")) {
    s.swap_log.push_back({ev.at("i").get<int>(), ev.at("j").get<int>(), ev.at("timestamp").get<std::string>(),
                          ev.at("resulting_team_score").get<Score>()});
  }
  s.current = role_assignment_from_json(j.at("current"));
  if (!j.at("finalized").is_null()) s.finalized = role_assignment_from_json(j.at("finalized"));

  RoleAssignment ra = s.initial.roles;
  for (const auto& ev : s.swap_log) {
    ra = apply_swap(s.assembly(), ra, ev.i, ev.j);
    const int team = s.assembly().team_of(ev.i);
    if (team_score(s.scores(), s.assembly(), ra, team) != ev.resulting_team_score) {
      throw Error(ErrorCode::InconsistentInput, "session " + s.id + ": logged team score disagrees with replay");
    }
  }
  if (ra.designations != s.current.designations) {
    throw Error(ErrorCode::InconsistentInput, "session " + s.id + ": swap log does not reproduce current roles");
  }
  if (s.finalized && s.finalized->designations != s.current.designations) {
    throw Error(ErrorCode::InconsistentInput, "session " + s.id + ": finalized roles differ from current");
  }
  return s;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

class SessionService {
 public:
  using Clock = std::function<std::string()>;

  explicit SessionService(std::filesystem::path data_dir, Clock clock = utc_timestamp)
      : data_dir_(std::move(data_dir)), clock_(std::move(clock)) {
    std::filesystem::create_directories(data_dir_);
  }

  /// Body: {"csv": "<score csv>"} or {"scores": {"roles": [...], "matrix":
  /// [[...]]}}, plus an optional "config" object.
  json create(const json& payload) {
    Solution solution = [&] {
      try {
        if (!payload.is_object()) throw Error(ErrorCode::InvalidInput, "payload must be a JSON object");
        SolveConfig config;
        if (payload.contains("config")) config = config_from_json(payload.at("config"));
        std::optional<ScoreMatrix> scores;
        if (payload.contains("csv")) {
          scores = parse_scores_csv(payload.at("csv").get<std::string>(), config.roles).matrix;
        } else if (payload.contains("scores")) {
          scores = score_matrix_from_json(payload.at("scores"));
          if (config.roles && *config.roles != scores->role_set()) {
            throw Error(ErrorCode::InvalidInput, "config roles must match the score matrix columns");
          }
        } else {
          throw Error(ErrorCode::InvalidInput, "payload needs 'csv' or 'scores'");
        }
        return solve(*scores, config);
      } catch (const InfeasibleError& e) {
        throw ServiceError(422, e.what(), e.rule());
      } catch (const Error& e) {
        throw ServiceError(400, e.what());
      } catch (const json::exception& e) {
        throw ServiceError(400, std::string("malformed payload: ") + e.what());
      }
    }();

    RoleAssignment current = solution.roles;
    auto slot = std::make_shared<Slot>(Session{new_id(), std::move(solution), std::move(current), {}, std::nullopt, 1});
    persist(slot->session);
    json body = view(slot->session);
    {
      std::lock_guard lock(mutex_);
      slots_[slot->session.id] = slot;
    }
    return body;
  }

  json get(const std::string& id) {
    auto slot = find(id);
    std::shared_lock lock(slot->mutex);
    return view(slot->session);
  }

  /// Preview of a swap: team scores afterwards, never mutates the session.
  json whatif(const std::string& id, int i, int j) {
    auto slot = find(id);
    std::shared_lock lock(slot->mutex);
    const Session& s = slot->session;
    if (s.finalized) throw ServiceError(409, "session is finalized");
    const auto after = checked_swap(s, i, j);
    const int team = s.assembly().team_of(i);
    const Score before_score = team_score(s.scores(), s.assembly(), s.current, team);
    const Score after_score = team_score(s.scores(), s.assembly(), after, team);
    json team_scores = json::object();
    for (int t = 1; t <= s.assembly().n(); ++t) {
      team_scores[std::to_string(t)] = team_score(s.scores(), s.assembly(), after, t);
    }
    return {{"session_id", s.id},
            {"version", s.version},
            {"i", i},
            {"j", j},
            {"team", team},
            {"current_team_score", before_score},
            {"new_team_score", after_score},
            {"new_team_scores", team_scores},
            {"delta", after_score - before_score},
            {"roles", to_json(after)},
            {"rule3_warnings", rule3_warnings(s.scores(), s.assembly(), after, team)}};
  }

  json swap(const std::string& id, int i, int j) {
    auto slot = find(id);
    std::unique_lock lock(slot->mutex);
    Session next = slot->session;
    if (next.finalized) throw ServiceError(409, "session is finalized");
    next.current = checked_swap(next, i, j);
    const int team = next.assembly().team_of(i);
    const Score score = team_score(next.scores(), next.assembly(), next.current, team);
    next.swap_log.push_back({i, j, clock_(), score});
    ++next.version;
    persist(next);
    slot->session = std::move(next);
    json body = view(slot->session);
    body["rule3_warnings"] = rule3_warnings(slot->session.scores(), slot->session.assembly(), slot->session.current, team);
    return body;
  }

  /// Freezes the current assignment as the FINAL document.
  json finalize(const std::string& id) {
    auto slot = find(id);
    std::unique_lock lock(slot->mutex);
    Session next = slot->session;
    if (next.finalized) throw ServiceError(409, "session is already finalized");
    RoleAssignment final_roles = next.current;
    final_roles.stage = Stage::Final;
    next.finalized = final_roles;
    ++next.version;
    persist(next);
    slot->session = std::move(next);
    return session_solution(slot->session, *slot->session.finalized);
  }

  /// Raw persisted bytes of a session document.
  std::string persisted(const std::string& id) {
    auto slot = find(id);
    std::shared_lock lock(slot->mutex);
    return read_text_file(path_for(id).string());
  }

  /// Drops the in-memory copy so the next access reloads (and replays) the
  /// persisted document.
  void evict(const std::string& id) {
    std::lock_guard lock(mutex_);
    slots_.erase(id);
  }

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

 private:
  struct Slot {
    explicit Slot(Session s) : session(std::move(s)) {}
    std::shared_mutex mutex;
    Session session;
  };

  json view(const Session& s) const {
    json log = json::array();
    for (const auto& ev : s.swap_log) {
      log.push_back({{"i", ev.i}, {"j", ev.j}, {"timestamp", ev.timestamp},
                     {"resulting_team_score", ev.resulting_team_score}});
    }
    return {{"session_id", s.id},
            {"version", s.version},
            {"finalized", s.finalized.has_value()},
            {"initial_roles", to_json(s.initial.roles)},
            {"swap_log", log},
            {"solution", session_solution(s, s.finalized ? *s.finalized : s.current)}};
  }

  RoleAssignment checked_swap(const Session& s, int i, int j) const {
    const int p = s.scores().p();
    if (i < 1 || i > p || j < 1 || j > p) throw ServiceError(400, "participant id out of range");
    try {
      return apply_swap(s.assembly(), s.current, i, j);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidSwap) throw ServiceError(409, e.what());
      throw ServiceError(400, e.what());
    }
  }

  std::shared_ptr<Slot> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    if (auto it = slots_.find(id); it != slots_.end()) return it->second;
    if (!valid_id(id)) throw ServiceError(404, "unknown session " + id);
    const auto path = path_for(id);
    if (!std::filesystem::exists(path)) throw ServiceError(404, "unknown session " + id);
    std::shared_ptr<Slot> slot;
    try {
      slot = std::make_shared<Slot>(session_from_json(json::parse(read_text_file(path.string()))));
    } catch (const json::exception& e) {
      throw ServiceError(500, "corrupt session " + id + ": " + e.what());
    } catch (const Error& e) {
      throw ServiceError(500, "corrupt session " + id + ": " + e.what());
    }
    slots_[id] = slot;
    return slot;
  }

  void persist(const Session& s) const {
    const auto path = path_for(s.id);
    auto tmp = path;
    tmp += ".tmp";
    write_text_file(tmp.string(), dump_canonical(session_to_json(s)));
    std::filesystem::rename(tmp, path);
  }

  std::filesystem::path path_for(const std::string& id) const { return data_dir_ / (id + ".json"); }

  static bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
      if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
  }

  static std::string new_id() {
    std::random_device rd;
    std::string out;
    char buf[9];
    for (int k = 0; k < 4; ++k) {
      std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
      out += buf;
    }
    return out;
  }

  std::filesystem::path data_dir_;
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

}  // namespace ctfteam
