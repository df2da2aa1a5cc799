#pragma once

// Team assembly: the snake draft, the max-capacity and random baselines,
// exhaustive enumeration of balanced two-team splits, and the compact
// binary encoding of two-team assemblies.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ctfteam/assignment.hpp"
#include "ctfteam/core_model.hpp"
#include "ctfteam/metrics.hpp"

namespace ctfteam {

namespace detail {
// Participant ids ordered by capacity, highest first; ties by lower id.
inline std::vector<int> by_capacity_desc(const ScoreMatrix& s) {
  const auto caps = capacities(s);
  std::vector<int> order(static_cast<std::size_t>(s.p()));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return caps[static_cast<std::size_t>(x - 1)] > caps[static_cast<std::size_t>(y - 1)];
  });
  return order;
}
}  // namespace detail

/// Teams take turns picking the highest-capacity remaining participant;
/// the pick order reverses every round (1..n, n..1, 1..n, ...).
inline TeamAssembly snake_draft(const ScoreMatrix& s, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "team count must be at least 1");
  if (n > s.p()) {
    throw InfeasibleError(1, "cannot draft " + std::to_string(n) + " teams from " + std::to_string(s.p()) +
                                 " participants");
  }
  const auto order = detail::by_capacity_desc(s);
  std::vector<int> teams(static_cast<std::size_t>(s.p()), 0);
  for (std::size_t pick = 0; pick < order.size(); ++pick) {
    const auto round = pick / static_cast<std::size_t>(n);
    const auto slot = static_cast<int>(pick % static_cast<std::size_t>(n));
    const int team = (round % 2 == 0) ? slot + 1 : n - slot;
    teams[static_cast<std::size_t>(order[pick] - 1)] = team;
  }
  return TeamAssembly(std::move(teams), n);
}

/// Baseline: the ceil(p/2) highest-capacity participants form team 1.
inline TeamAssembly max_capacity_team1(const ScoreMatrix& s, int n = 2) {
  if (n != 2) throw Error(ErrorCode::Unsupported, "max-capacity baseline is defined for two teams only");
  const auto order = detail::by_capacity_desc(s);
  const auto team1_size = static_cast<std::size_t>((s.p() + 1) / 2);
  std::vector<int> teams(static_cast<std::size_t>(s.p()), 2);
  for (std::size_t k = 0; k < team1_size; ++k) teams[static_cast<std::size_t>(order[k] - 1)] = 1;
  return TeamAssembly(std::move(teams), 2);
}

// ---------------------------------------------------------------------------
// Compact binary encoding for two teams. Participant 1 is the most
// significant of p bits; a set bit puts the participant in team 2.

inline constexpr int kMaxEncodedParticipants = 62;

struct AssemblyEncoding {
  std::uint64_t code = 0;
  int p = 0;

  bool operator==(const AssemblyEncoding&) const = default;
};

inline AssemblyEncoding encode_assembly(const TeamAssembly& a) {
  if (a.n() != 2) throw Error(ErrorCode::Unsupported, "binary encoding needs exactly two teams");
  if (a.p() > kMaxEncodedParticipants) throw Error(ErrorCode::BoundExceeded, "too many participants to encode");
  std::uint64_t code = 0;
  for (int t : a.teams()) code = (code << 1) | (t == 2 ? 1u : 0u);
  return {code, a.p()};
}

inline TeamAssembly decode_assembly(const AssemblyEncoding& e) {
  if (e.p < 1 || e.p > kMaxEncodedParticipants) {
    throw Error(ErrorCode::InvalidCode, "participant count " + std::to_string(e.p) + " cannot be encoded");
  }
  if (e.code >> e.p != 0) {
    throw Error(ErrorCode::InvalidCode,
                "code " + std::to_string(e.code) + " does not fit in " + std::to_string(e.p) + " bits");
  }
  std::vector<int> teams(static_cast<std::size_t>(e.p));
  for (int i = 0; i < e.p; ++i) {
    teams[static_cast<std::size_t>(i)] = ((e.code >> (e.p - 1 - i)) & 1u) ? 2 : 1;
  }
  return TeamAssembly(std::move(teams), 2);
}

inline std::string to_bit_string(const AssemblyEncoding& e) {
  std::string out;
  for (int i = e.p - 1; i >= 0; --i) out.push_back(((e.code >> i) & 1u) ? '1' : '0');
  return out;
}

// ---------------------------------------------------------------------------
// Balanced two-team enumeration

inline constexpr int kDefaultExhaustiveBound = 20;

/// Ascending range over every p-bit code whose team sizes differ by at most
/// one. Dereferencing yields the decoded TeamAssembly; code() gives the raw
/// encoding.
class BalancedAssemblies {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = TeamAssembly;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(int p, std::uint64_t code) : p_(p), code_(code) { skip(); }

    TeamAssembly operator*() const { return decode_assembly({code_, p_}); }
    std::uint64_t code() const noexcept { return code_; }

    iterator& operator++() {
      ++code_;
      skip();
      return *this;
    }
    iterator operator++(int) {
      auto prev = *this;
      ++*this;
      return prev;
    }
    bool operator==(const iterator& other) const noexcept { return code_ == other.code_; }

   private:
    void skip() {
      const std::uint64_t end = std::uint64_t{1} << p_;
      while (code_ < end && !balanced(code_)) ++code_;
    }
    bool balanced(std::uint64_t code) const noexcept {
      const int ones = std::popcount(code);
      return ones == p_ / 2 || ones == (p_ + 1) / 2;
    }

    int p_ = 0;
    std::uint64_t code_ = 0;
  };

  explicit BalancedAssemblies(int p) : p_(p) {}

  iterator begin() const { return iterator(p_, 0); }
  iterator end() const { return iterator(p_, std::uint64_t{1} << p_); }
  int p() const noexcept { return p_; }

 private:
  int p_;
};

inline BalancedAssemblies enumerate_balanced(int p, int bound = kDefaultExhaustiveBound) {
  if (p < 1) throw Error(ErrorCode::InvalidInput, "need at least one participant");
  if (p > bound || p > kMaxEncodedParticipants) {
    throw Error(ErrorCode::BoundExceeded, "p = " + std::to_string(p) + " exceeds the exhaustive bound " +
                                              std::to_string(bound) + " (--exhaustive-bound)");
  }
  return BalancedAssemblies(p);
}

// ---------------------------------------------------------------------------
// Per-assembly evaluation shared by the exhaustive and Monte Carlo baselines.

struct TwoTeamEvaluation {
  std::array<Score, 2> capacity{};
  std::array<Score, 2> score{};
  std::array<double, 2> sigma{};
  bool assignable = false;  // both teams admit a valid role assignment
};

inline TwoTeamEvaluation evaluate_two_teams(const ScoreMatrix& s, const TeamAssembly& a,
                                            const AssignOptions& options = {}) {
  TwoTeamEvaluation ev;
  ev.assignable = true;
  for (int t = 1; t <= 2; ++t) {
    const auto idx = static_cast<std::size_t>(t - 1);
    ev.capacity[idx] = team_capacity(s, a, t);
    ev.sigma[idx] = a.team_size(t) > 0 ? within_team_sigma(s, a, t) : 0.0;
    if (a.team_size(t) < s.r()) {
      ev.assignable = false;
      continue;
    }
    try {
      ev.score[idx] = hungarian_score(build_cost_matrix(s, a, t, options));
    } catch (const InfeasibleError&) {
      ev.assignable = false;
    }
  }
  return ev;
}

struct AveragedStats {
  std::uint64_t assemblies = 0;         // balanced assemblies enumerated
  std::uint64_t scored_assemblies = 0;  // of those, with a valid role assignment for both teams
  std::array<double, 2> mean_capacity{};
  std::array<double, 2> mean_sigma{};
  std::array<double, 2> mean_score{};   // over scored assemblies
};

struct ExhaustiveOptions {
  int bound = kDefaultExhaustiveBound;
  unsigned threads = 0;  // 0 = hardware concurrency
  AssignOptions assign;
};

/// Means over every balanced two-team assembly. Capacities average over all
/// assemblies; optimal team scores average over the assemblies where both
/// teams can be role-assigned.
inline AveragedStats averaged_balanced_stats(const ScoreMatrix& s, const ExhaustiveOptions& options = {}) {
  const auto range = enumerate_balanced(s.p(), options.bound);
  const std::uint64_t end = std::uint64_t{1} << s.p();

  // Fixed chunking keeps the floating-point summation order independent of
  // the thread count.
  constexpr std::uint64_t kChunks = 64;
  struct Partial {
    std::uint64_t count = 0, scored = 0;
    std::array<Score, 2> capacity{}, score{};
    std::array<double, 2> sigma{};
  };
  std::vector<Partial> partials(kChunks);

  auto run_chunk = [&](std::uint64_t chunk) {
    const std::uint64_t lo = end * chunk / kChunks;
    const std::uint64_t hi = end * (chunk + 1) / kChunks;
    Partial& part = partials[chunk];
    for (auto it = BalancedAssemblies::iterator(range.p(), lo); it.code() < hi; ++it) {
      const auto ev = evaluate_two_teams(s, *it, options.assign);
      ++part.count;
      for (std::size_t t = 0; t < 2; ++t) {
        part.capacity[t] += ev.capacity[t];
        part.sigma[t] += ev.sigma[t];
      }
      if (ev.assignable) {
        ++part.scored;
        for (std::size_t t = 0; t < 2; ++t) part.score[t] += ev.score[t];
      }
    }
  };

  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, kChunks);
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < kChunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < kChunks; c += workers) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  Partial sum;
  for (const auto& part : partials) {
    sum.count += part.count;
    sum.scored += part.scored;
    for (std::size_t t = 0; t < 2; ++t) {
      sum.capacity[t] += part.capacity[t];
      sum.score[t] += part.score[t];
      sum.sigma[t] += part.sigma[t];
    }
  }

  AveragedStats out;
  out.assemblies = sum.count;
  out.scored_assemblies = sum.scored;
  for (std::size_t t = 0; t < 2; ++t) {
    out.mean_capacity[t] = static_cast<double>(sum.capacity[t]) / static_cast<double>(sum.count);
    out.mean_sigma[t] = sum.sigma[t] / static_cast<double>(sum.count);
    out.mean_score[t] = sum.scored ? static_cast<double>(sum.score[t]) / static_cast<double>(sum.scored) : 0.0;
  }
  if (sum.scored == 0) {
    throw InfeasibleError(0, "no balanced assembly admits a valid role assignment for both teams");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo random assembly

enum class SamplingMode { Balanced, Unconstrained };

/// Draws two-team assemblies. Balanced mode is uniform over the balanced
/// assemblies; unconstrained mode reads a uniform code in [0, 2^p) and may
/// leave a team empty.
class RandomAssemblySampler {
 public:
  RandomAssemblySampler(int p, SamplingMode mode, std::uint64_t seed) : p_(p), mode_(mode), rng_(seed) {
    if (p_ < 2 || p_ > kMaxEncodedParticipants) {
      throw Error(ErrorCode::InvalidConfig, "random assembly needs between 2 and 62 participants");
    }
    ids_.resize(static_cast<std::size_t>(p_));
    std::iota(ids_.begin(), ids_.end(), 1);
  }

  TeamAssembly next() {
    if (mode_ == SamplingMode::Unconstrained) {
      std::uniform_int_distribution<std::uint64_t> code(std::uint64_t{0}, (std::uint64_t{1} << p_) - 1);
      return decode_assembly({code(rng_), p_});
    }
    int team2 = p_ / 2;
    if (p_ % 2 == 1 && std::bernoulli_distribution(0.5)(rng_)) team2 += 1;
    std::shuffle(ids_.begin(), ids_.end(), rng_);
    std::vector<int> teams(static_cast<std::size_t>(p_), 1);
    for (int k = 0; k < team2; ++k) teams[static_cast<std::size_t>(ids_[static_cast<std::size_t>(k)] - 1)] = 2;
    return TeamAssembly(std::move(teams), 2);
  }

 private:
  int p_;
  SamplingMode mode_;
  std::mt19937_64 rng_;
  std::vector<int> ids_;
};

/// First draw from the sampler whose teams are both non-empty and
/// role-assignable.
inline TeamAssembly random_assembly(const ScoreMatrix& s, SamplingMode mode, std::uint64_t seed,
                                    const AssignOptions& options = {}) {
  RandomAssemblySampler sampler(s.p(), mode, seed);
  for (int attempt = 0; attempt < 100'000; ++attempt) {
    auto a = sampler.next();
    if (a.is_complete() && evaluate_two_teams(s, a, options).assignable) return a;
  }
  throw InfeasibleError(0, "no sampled assembly admits a valid role assignment for both teams");
}

/// Balanced assembly with the highest total optimal team score (lowest code
/// on ties). Exhaustive over C(p, p/2) splits.
inline TeamAssembly exhaustive_best_assembly(const ScoreMatrix& s, int bound = kDefaultExhaustiveBound,
                                             const AssignOptions& options = {}) {
  std::optional<Score> best;
  std::uint64_t best_code = 0;
  const auto range = enumerate_balanced(s.p(), bound);
  for (auto it = range.begin(); it != range.end(); ++it) {
    const auto ev = evaluate_two_teams(s, *it, options);
    if (!ev.assignable) continue;
    const Score total = ev.score[0] + ev.score[1];
    if (!best || total > *best) {
      best = total;
      best_code = it.code();
    }
  }
  if (!best) throw InfeasibleError(0, "no balanced assembly admits a valid role assignment for both teams");
  return decode_assembly({best_code, s.p()});
}

struct MonteCarloOptions {
  SamplingMode mode = SamplingMode::Balanced;
  double epsilon = 0.01;  // score points
  std::uint64_t max_samples = 1'000'000;
  std::uint64_t window = 1000;
  std::uint64_t seed = 0;
  AssignOptions assign;
};

struct MonteCarloResult {
  std::uint64_t samples = 0;
  std::uint64_t rejected = 0;  // draws redrawn: empty team or no valid role assignment
  std::array<double, 2> mean_team_scores{};
  std::array<double, 2> mean_capacities{};
  std::array<double, 2> mean_sigmas{};
  double mean_score = 0.0;       // running mean of the per-sample average team score
  double standard_error = 0.0;   // of mean_score
  bool converged = false;

  bool operator==(const MonteCarloResult&) const = default;
};

/// Samples random two-team assemblies, role-assigns each optimally and
/// tracks running means. Stops once the running mean of the team score
/// moves by less than epsilon across one window, or at max_samples.
inline MonteCarloResult random_assembly_mc(const ScoreMatrix& s, const MonteCarloOptions& options) {
  if (options.max_samples < 1) throw Error(ErrorCode::InvalidConfig, "max_samples must be at least 1");
  if (options.window < 1) throw Error(ErrorCode::InvalidConfig, "window must be at least 1");
  if (!(options.epsilon >= 0.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be non-negative");
  const int p = s.p();

  RandomAssemblySampler sampler(p, options.mode, options.seed);
  auto draw = [&] { return sampler.next(); };

  const std::uint64_t max_attempts = std::max<std::uint64_t>(100'000, 100 * options.max_samples);
  MonteCarloResult out;
  std::array<double, 2> sum_score{}, sum_cap{}, sum_sigma{};
  double mean = 0.0, m2 = 0.0;
  double checkpoint_mean = 0.0;

  for (std::uint64_t attempt = 0; out.samples < options.max_samples; ++attempt) {
    if (attempt >= max_attempts) {
      if (out.samples == 0) {
        throw InfeasibleError(0, "no sampled assembly admits a valid role assignment for both teams");
      }
      break;
    }
    const auto a = draw();
    if (!a.is_complete()) {
      ++out.rejected;
      continue;
    }
    const auto ev = evaluate_two_teams(s, a, options.assign);
    if (!ev.assignable) {
      ++out.rejected;
      continue;
    }
    ++out.samples;
    for (std::size_t t = 0; t < 2; ++t) {
      sum_score[t] += static_cast<double>(ev.score[t]);
      sum_cap[t] += static_cast<double>(ev.capacity[t]);
      sum_sigma[t] += ev.sigma[t];
    }
    const double x = 0.5 * static_cast<double>(ev.score[0] + ev.score[1]);
    const double delta = x - mean;
    mean += delta / static_cast<double>(out.samples);
    m2 += delta * (x - mean);

    if (out.samples == 1) checkpoint_mean = mean;
    if (out.samples % options.window == 0) {
      if (std::fabs(mean - checkpoint_mean) < options.epsilon) {
        out.converged = true;
        break;
      }
      checkpoint_mean = mean;
    }
  }

  const auto n = static_cast<double>(out.samples);
  for (std::size_t t = 0; t < 2; ++t) {
    out.mean_team_scores[t] = sum_score[t] / n;
    out.mean_capacities[t] = sum_cap[t] / n;
    out.mean_sigmas[t] = sum_sigma[t] / n;
  }
  out.mean_score = mean;
  out.standard_error = out.samples > 1 ? std::sqrt(m2 / (n - 1.0)) / std::sqrt(n) : 0.0;
  return out;
}

}  // namespace ctfteam
