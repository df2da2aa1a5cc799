#pragma once

// End-to-end solve: feasibility -> team assembly -> per-team role
// assignment -> metrics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctfteam/assembly.hpp"
#include "ctfteam/assignment.hpp"
#include "ctfteam/compare.hpp"
#include "ctfteam/core_model.hpp"
#include "ctfteam/feasibility.hpp"
#include "ctfteam/metrics.hpp"

namespace ctfteam {

struct McConfig {
  SamplingMode mode = SamplingMode::Balanced;
  double epsilon = 0.01;
  std::uint64_t max_samples = 1'000'000;

  bool operator==(const McConfig&) const = default;
};

struct SolveConfig {
  // Empty: take the role columns of the score file in file order.
  std::optional<RoleSet> roles;
  int n = 1;
  Method method = Method::Draft;
  std::uint64_t seed = 0;
  bool rule3_strict = true;
  bool coverage_strict = false;
  int exhaustive_bound = kDefaultExhaustiveBound;
  int brute_force_bound = 9;
  McConfig mc;
  bool include_labels = false;

  void validate() const {
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "team count must be at least 1");
    if (method == Method::ExhaustiveAverage) {
      throw Error(ErrorCode::InvalidConfig, "exhaustive-average is a comparison baseline, not an assembly method");
    }
    if (method != Method::Draft && n != 2) {
      throw Error(ErrorCode::InvalidConfig, std::string(to_string(method)) + " assembly needs exactly two teams");
    }
    if (exhaustive_bound < 1) throw Error(ErrorCode::InvalidConfig, "exhaustive bound must be positive");
    if (brute_force_bound < 1) throw Error(ErrorCode::InvalidConfig, "brute-force bound must be positive");
    if (mc.max_samples < 1) throw Error(ErrorCode::InvalidConfig, "mc max_samples must be at least 1");
    if (!(mc.epsilon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "mc epsilon must be non-negative");
  }

  AssignOptions assign_options() const { return {!rule3_strict, brute_force_bound}; }

  CompareOptions compare_options() const {
    CompareOptions out;
    out.n = n;
    out.assign = assign_options();
    out.mc.mode = mc.mode;
    out.mc.epsilon = mc.epsilon;
    out.mc.max_samples = mc.max_samples;
    out.mc.seed = seed;
    out.exhaustive.bound = exhaustive_bound;
    return out;
  }

  bool operator==(const SolveConfig&) const = default;
};

struct Solution {
  SolveConfig config;
  ScoreMatrix scores;
  TeamAssembly assembly;
  RoleAssignment roles;
  AssemblyReport report;

  bool operator==(const Solution&) const = default;
};

/// Feasibility report for a solve; rule-3 coverage shortfalls are downgraded
/// to warnings when rule 3 is relaxed.
inline FeasibilityReport validate_instance(const ScoreMatrix& s, const SolveConfig& config) {
  auto report = check_role_coverage(s, config.n, {config.coverage_strict});
  if (!config.rule3_strict) {
    std::erase_if(report.violations, [](const RuleViolation& v) { return v.rule == 3; });
    report.feasible = report.violations.empty();
  }
  return report;
}

inline TeamAssembly assemble(const ScoreMatrix& s, const SolveConfig& config) {
  config.validate();
  switch (config.method) {
    case Method::Draft: return snake_draft(s, config.n);
    case Method::MaxCap: return max_capacity_team1(s, config.n);
    case Method::Random:
      return random_assembly(s, config.mc.mode, config.seed, config.assign_options());
    case Method::Exhaustive:
      return exhaustive_best_assembly(s, config.exhaustive_bound, config.assign_options());
    case Method::ExhaustiveAverage: break;
  }
  throw Error(ErrorCode::InvalidConfig, "unsupported assembly method");
}

inline std::string describe(const std::vector<RuleViolation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += "rule " + std::to_string(v.rule) + ": " + v.detail;
  }
  return out;
}

inline Solution solve(const ScoreMatrix& s, const SolveConfig& config) {
  config.validate();
  const auto feasibility = validate_instance(s, config);
  if (!feasibility.feasible) {
    throw InfeasibleError(feasibility.violations.front().rule, describe(feasibility.violations));
  }
  auto assembly = assemble(s, config);
  auto assigned = assign_roles(s, assembly, config.assign_options());
  auto report = make_report(s, assembly, assigned.roles);
  SolveConfig effective = config;
  effective.roles = s.role_set();
  return Solution{std::move(effective), s, std::move(assembly), std::move(assigned.roles), std::move(report)};
}

}  // namespace ctfteam
