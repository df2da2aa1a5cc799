// ctfteam: command-line front end for team assembly and role assignment.
//
// Exit codes: 0 success, 1 error, 2 infeasible instance.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctfteam/http.hpp"
#include "ctfteam/io.hpp"
#include "ctfteam/pipeline.hpp"

namespace {

using namespace ctfteam;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr const char* kConfigEnv = "CTFTEAM_CONFIG";

struct CommonFlags {
  std::string scores;
  std::string config_path;
  std::string roles;
  int n = 1;
  std::string method = "draft";
  std::uint64_t seed = 0;
  bool relax_rule3 = false;
  bool strict_coverage = false;
  int exhaustive_bound = kDefaultExhaustiveBound;
  int brute_force_bound = 9;
  std::string mc_mode = "balanced";
  double mc_epsilon = 0.01;
  std::uint64_t mc_max_samples = 1'000'000;
  bool labels = false;
  std::string format = "table";
};

struct Options {
  CLI::Option* n = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* roles = nullptr;
  CLI::Option* relax = nullptr;
  CLI::Option* strict_coverage = nullptr;
  CLI::Option* exhaustive_bound = nullptr;
  CLI::Option* brute_force_bound = nullptr;
  CLI::Option* mc_mode = nullptr;
  CLI::Option* mc_epsilon = nullptr;
  CLI::Option* mc_max_samples = nullptr;
  CLI::Option* labels = nullptr;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "not an integer list: '" + s + "'");
    }
  }
  return out;
}

Options add_solver_flags(CLI::App* cmd, CommonFlags& f, bool with_method) {
  Options o;
  cmd->add_option("--scores", f.scores, "Score matrix CSV (participant,<ROLE>...)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", f.config_path, "JSON config file (default: $" + std::string(kConfigEnv) + ")");
  o.roles = cmd->add_option("--roles", f.roles, "Comma-separated role codes in column order, e.g. IN,DE,IM,CO");
  o.n = cmd->add_option("-n,--teams", f.n, "Number of teams")->check(CLI::PositiveNumber);
  if (with_method) {
    o.method = cmd->add_option("--method", f.method, "Assembly method")
                   ->check(CLI::IsMember({"draft", "maxcap", "random", "exhaustive"}));
  }
  o.seed = cmd->add_option("--seed", f.seed, "Seed for every random choice");
  o.relax = cmd->add_flag("--relax-rule3", f.relax_rule3, "Allow zero-score role holders (warning only)");
  o.strict_coverage =
      cmd->add_flag("--strict-coverage", f.strict_coverage, "Require more than n capable participants per role");
  o.exhaustive_bound = cmd->add_option("--exhaustive-bound", f.exhaustive_bound, "Largest p for exhaustive enumeration");
  o.brute_force_bound = cmd->add_option("--brute-force-bound", f.brute_force_bound, "Largest team for brute-force assignment");
  o.mc_mode = cmd->add_option("--mc-mode", f.mc_mode, "Random assembly sampling mode")
                  ->check(CLI::IsMember({"balanced", "unconstrained"}));
  o.mc_epsilon = cmd->add_option("--mc-epsilon", f.mc_epsilon, "Monte Carlo convergence threshold (score points)");
  o.mc_max_samples = cmd->add_option("--mc-max-samples", f.mc_max_samples, "Monte Carlo sample cap");
  o.labels = cmd->add_flag("--labels", f.labels, "Include participant labels in output");
  return o;
}

// Config file (or $CTFTEAM_CONFIG) first, then explicit flags on top.
SolveConfig build_config(const CommonFlags& f, const Options& o) {
  SolveConfig config;
  std::string path = f.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (!path.empty()) config = read_config_json(path);

  if (o.roles && o.roles->count()) config.roles = RoleSet::parse(split_list(f.roles));
  if (o.n && o.n->count()) config.n = f.n;
  if (o.method && o.method->count()) config.method = *parse_method(f.method);
  if (o.seed && o.seed->count()) config.seed = f.seed;
  if (o.relax && o.relax->count()) config.rule3_strict = false;
  if (o.strict_coverage && o.strict_coverage->count()) config.coverage_strict = true;
  if (o.exhaustive_bound && o.exhaustive_bound->count()) config.exhaustive_bound = f.exhaustive_bound;
  if (o.brute_force_bound && o.brute_force_bound->count()) config.brute_force_bound = f.brute_force_bound;
  if (o.mc_mode && o.mc_mode->count()) config.mc.mode = parse_sampling_mode(f.mc_mode);
  if (o.mc_epsilon && o.mc_epsilon->count()) config.mc.epsilon = f.mc_epsilon;
  if (o.mc_max_samples && o.mc_max_samples->count()) config.mc.max_samples = f.mc_max_samples;
  if (o.labels && o.labels->count()) config.include_labels = true;
  config.validate();
  return config;
}

ScoreMatrix load_scores(const CommonFlags& f, const SolveConfig& config) {
  auto table = read_scores_csv(f.scores, config.roles);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  return std::move(table.matrix);
}

std::string join_teams(const TeamAssembly& a) {
  std::string out;
  for (int t : a.teams()) {
    if (!out.empty()) out += ",";
    out += std::to_string(t);
  }
  return out;
}

std::string join_roles(const RoleAssignment& ra) {
  std::string out;
  for (const auto& d : ra.designations) {
    if (!out.empty()) out += ",";
    out += to_string(d);
  }
  return out;
}

void print_summary(std::ostream& out, const Solution& sol) {
  out << "assembly: [" << join_teams(sol.assembly) << "]\n";
  out << "roles:    [" << join_roles(sol.roles) << "]\n";
  for (const auto& t : sol.report.teams) {
    out << "team " << t.team << ": score " << t.team_score << ", capacity " << t.capacity << ", sigma "
        << detail::fixed2(t.sigma) << ", capacity vs average " << format_pct(t.capacity_vs_average_pct) << "\n";
  }
  if (sol.report.score_pct_delta) out << "team score delta: " << format_pct(*sol.report.score_pct_delta) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team assembly and role assignment from CTF skill scores", "ctfteam"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctfteam 1.0.0");

  CommonFlags f;

  auto* validate = app.add_subcommand("validate", "Check that the instance can form complete teams");
  const auto validate_opts = add_solver_flags(validate, f, true);
  bool exact = false;
  validate->add_flag("--exact", exact, "Also check an exact role matching for the assembled teams");
  validate->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "json"}));

  auto* assemble_cmd = app.add_subcommand("assemble", "Assign participants to teams");
  const auto assemble_opts = add_solver_flags(assemble_cmd, f, true);
  assemble_cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "json"}));

  auto* assign_cmd = app.add_subcommand("assign", "Optimal role assignment for a given or computed assembly");
  const auto assign_opts = add_solver_flags(assign_cmd, f, true);
  std::string assembly_list;
  bool oracle = false;
  assign_cmd->add_option("--assembly", assembly_list, "Team of each participant, e.g. 1,2,2,1 (default: run --method)");
  assign_cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  assign_cmd->add_flag("--oracle", oracle, "Cross-check every team against exhaustive search");

  auto* solve_cmd = app.add_subcommand("solve", "Full pipeline: feasibility, assembly, roles, metrics");
  const auto solve_opts = add_solver_flags(solve_cmd, f, true);
  std::string out_path;
  solve_cmd->add_option("-o,--out", out_path, "Write the solution JSON here");
  solve_cmd->add_option("--format", f.format, "Stdout format")->check(CLI::IsMember({"table", "json"}));

  auto* compare_cmd = app.add_subcommand("compare", "Compare assembly methods after optimal role assignment");
  const auto compare_opts = add_solver_flags(compare_cmd, f, false);
  std::string methods = "draft,maxcap,random,exhaustive-average";
  compare_cmd->add_option("--methods", methods,
                          "Comma-separated subset of draft,maxcap,random,exhaustive,exhaustive-average");
  compare_cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));

  auto* encode_cmd = app.add_subcommand("encode", "Binary code of a two-team assembly");
  encode_cmd->add_option("--assembly", assembly_list, "Team of each participant (1 or 2), e.g. 2,2,1,1")->required();

  auto* decode_cmd = app.add_subcommand("decode", "Two-team assembly of a binary code");
  std::uint64_t code = 0;
  int p = 0;
  decode_cmd->add_option("--code", code, "Integer code")->required();
  decode_cmd->add_option("-p,--participants", p, "Participant count")->required()->check(CLI::PositiveNumber);

  auto* serve_cmd = app.add_subcommand("serve", "Run the what-if session HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "sessions";
  std::string cors_origin = "*";
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--data-dir", data_dir, "Directory for persisted sessions");
  serve_cmd->add_option("--cors-origin", cors_origin, "Allowed CORS origin for the UI");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*validate) {
      const auto config = build_config(f, validate_opts);
      const auto scores = load_scores(f, config);
      auto report = validate_instance(scores, config);
      std::optional<bool> exact_ok;
      if (exact && report.feasible) exact_ok = check_exact_feasibility(scores, assemble(scores, config));
      if (f.format == "json") {
        auto j = to_json(report);
        if (exact_ok) j["exact"] = *exact_ok;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << (report.feasible ? "feasible" : "infeasible") << "\n";
        for (const auto& [role, count] : report.per_role_coverage) {
          std::cout << "  " << to_string(role) << ": " << count << " capable\n";
        }
        for (const auto& v : report.violations) std::cout << "  rule " << v.rule << ": " << v.detail << "\n";
        if (exact_ok) std::cout << "exact role matching: " << (*exact_ok ? "yes" : "no") << "\n";
      }
      return report.feasible && exact_ok.value_or(true) ? kExitOk : kExitInfeasible;
    }

    if (*assemble_cmd) {
      const auto config = build_config(f, assemble_opts);
      const auto scores = load_scores(f, config);
      const auto a = assemble(scores, config);
      if (f.format == "json") {
        json teams = json::array();
        for (int t = 1; t <= a.n(); ++t) {
          teams.push_back({{"id", t}, {"members", a.members(t)}, {"capacity", team_capacity(scores, a, t)}});
        }
        std::cout << json{{"assembly", a.teams()}, {"teams", teams}}.dump(2) << "\n";
      } else {
        std::cout << "assembly: [" << join_teams(a) << "]\n";
        for (int t = 1; t <= a.n(); ++t) {
          std::cout << "team " << t << ": capacity " << team_capacity(scores, a, t) << ", members "
                    << json(a.members(t)).dump() << "\n";
        }
      }
      return kExitOk;
    }

    if (*assign_cmd) {
      const auto config = build_config(f, assign_opts);
      const auto scores = load_scores(f, config);
      int n = config.n;
      std::vector<int> teams = parse_int_list(assembly_list);
      if (!teams.empty()) n = *std::max_element(teams.begin(), teams.end());
      const auto a = teams.empty() ? assemble(scores, config) : TeamAssembly(teams, n);
      if (!a.is_complete()) throw Error(ErrorCode::InvalidInput, "every team needs at least one member");
      const auto result = assign_roles(scores, a, config.assign_options());
      if (oracle) {
        for (int t = 1; t <= a.n(); ++t) {
          const auto bf = brute_force_assign(scores, a, t, config.assign_options());
          if (bf.score != result.team_scores[static_cast<std::size_t>(t - 1)]) {
            throw Error(ErrorCode::InconsistentInput, "oracle disagrees on team " + std::to_string(t));
          }
        }
      }
      if (f.format == "json") {
        std::cout << json{{"assembly", a.teams()}, {"roles", to_json(result.roles)}, {"team_scores", result.team_scores}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "roles: [" << join_roles(result.roles) << "]\n";
        for (std::size_t t = 0; t < result.team_scores.size(); ++t) {
          std::cout << "team " << t + 1 << ": score " << result.team_scores[t] << "\n";
        }
        if (oracle) std::cout << "oracle: agrees\n";
      }
      return kExitOk;
    }

    if (*solve_cmd) {
      const auto config = build_config(f, solve_opts);
      const auto scores = load_scores(f, config);
      const auto solution = solve(scores, config);
      if (!out_path.empty()) write_solution_json(solution, out_path);
      if (f.format == "json") {
        std::cout << dump_canonical(solution_to_json(solution));
      } else {
        print_summary(std::cout, solution);
      }
      return kExitOk;
    }

    if (*compare_cmd) {
      auto config = build_config(f, compare_opts);
      if (!compare_opts.n->count()) config.n = 2;
      const auto scores = load_scores(f, config);
      std::vector<Method> list;
      for (const auto& name : split_list(methods)) {
        auto m = parse_method(name);
        if (!m) throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
        list.push_back(*m);
      }
      const auto rows = compare_methods(scores, list, config.compare_options());
      if (f.format == "json") {
        std::cout << to_json(rows).dump(2) << "\n";
      } else if (f.format == "csv") {
        std::cout << render_csv(rows);
      } else {
        std::cout << render_table(rows);
      }
      return kExitOk;
    }

    if (*encode_cmd) {
      const auto teams = parse_int_list(assembly_list);
      const auto e = encode_assembly(TeamAssembly(teams, 2));
      std::cout << e.code << " " << to_bit_string(e) << "\n";
      return kExitOk;
    }

    if (*decode_cmd) {
      const auto a = decode_assembly({code, p});
      std::cout << "[" << join_teams(a) << "]\n";
      return kExitOk;
    }

    if (*serve_cmd) {
      SessionService service(data_dir);
      httplib::Server server;
      mount_routes(server, service, cors_origin);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return kExitError;
      }
      return kExitOk;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
