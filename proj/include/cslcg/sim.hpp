#pragma once

// Monte Carlo runs of a strategy profile, frequency estimates for objectives,
// and an exhaustive small-controller oracle for bounded 1.5-player games.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cslcg/conjunction.hpp"
#include "cslcg/oracle.hpp"
#include "cslcg/strategy.hpp"

namespace cslcg {

struct SimConfig {
  LossModel loss;
  int horizon = 100;  // steps; 0 gives the initial state only
  int episodes = 1;
  std::uint64_t seed = 0;
  bool keep_traces = false;
  int jobs = 1;
};

struct SimStep {
  int joint = 0;
  int location = 0;           // sampled successor location
  ChannelOp op;
  std::vector<int> pushed;    // channel after the operation, before losses
  State next;
};

struct Episode {
  std::vector<State> states;  // horizon + 1 states
  std::vector<SimStep> steps;
};

/// One strategy per agent of the arena.
struct StrategyProfile {
  ArenaPtr arena;
  std::vector<Strategy> strategies;

  static StrategyProfile uniform(const ArenaPtr& arena);
  void set(Strategy s);
};

struct ObjectiveStats {
  std::string objective;
  int satisfied = 0;
  int episodes = 0;
  double frequency() const { return episodes ? static_cast<double>(satisfied) / episodes : 0.0; }
  /// Standard error of the frequency.
  double std_error() const;
};

struct SimResult {
  std::vector<Episode> traces;  // only with keep_traces
  std::vector<ObjectiveStats> stats;
  std::uint64_t digest = 0;     // order-independent fingerprint of all episodes
};

/// Per-episode generator: mt19937_64 seeded by splitmix64 of (seed, episode).
std::mt19937_64 episode_rng(std::uint64_t seed, std::uint64_t episode);

/// Runs the profile. F R counts a visit to R, G R counts R held at every step,
/// GF R counts a visit in the last quarter of the horizon. Quantifiers are ignored.
SimResult simulate(const StrategyProfile& profile, const SimConfig& cfg, const std::vector<Objective>& watch = {});
Episode simulate_episode(const StrategyProfile& profile, const SimConfig& cfg, std::mt19937_64& rng);
/// Whether a single trace satisfies the path formula of an objective.
bool trace_satisfies(const Episode& e, const Objective& o);

/// Samples the post-loss channel: each message survives independently with probability 1 - λ.
std::vector<int> sample_loss(const LossModel& loss, const std::vector<int>& channel, std::mt19937_64& rng);

/// Random PFM strategy: 4 random regular guards, each split by allowed-action
/// pattern, with cell distributions drawn uniformly from the simplex.
PFMStrategy random_pfm(const ArenaPtr& arena, int player, std::mt19937_64& rng);

/// Line-per-step text export of a trace.
std::string format_episode(const Arena& arena, const Episode& e);

struct SmallControllerResult {
  bool exists = false;
  long controllers = 0;         // complete controllers evaluated
  int reachable_states = 0;     // explored states of the arena
};

/// Exhaustive search over deterministic controllers for player 0 of a
/// 1.5-player arena with at most `memory_bound` memory states. The action
/// depends on (state, memory), the memory update on (memory, next state).
/// Each controller induces a finite Markov chain, checked qualitatively by
/// graph analysis. Throws if a reachable channel exceeds `channel_bound`.
SmallControllerResult oracle_small_controller(const ArenaPtr& arena, const Conjunction& phi, int memory_bound, int channel_bound);

}  // namespace cslcg
