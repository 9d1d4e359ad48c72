#pragma once

// Arena data, allowed actions, coalition projection, loss probabilities and
// monitor-lifted arenas used by the solvers.

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cslcg/regset.hpp"

namespace cslcg {

using Rational = boost::rational<std::int64_t>;

struct Outcome {
  Rational probability;
  int location = 0;
  ChannelOp op;
};
using Distribution = std::vector<Outcome>;

/// A concrete configuration l·μ (message indices).
struct State {
  int location = 0;
  std::vector<int> channel;
  bool operator==(const State&) const = default;
  auto operator<=>(const State&) const = default;
};

/// Joint actions are encoded in mixed radix, agent 0 most significant.
class Arena {
 public:
  std::vector<std::string> agents;
  AlphabetPtr alphabet;
  int initial_location = 0;
  std::vector<std::vector<std::string>> actions;  // per agent
  std::vector<std::vector<Distribution>> table;    // [location][joint]

  int num_agents() const { return static_cast<int>(agents.size()); }
  int num_actions(int agent) const { return static_cast<int>(actions[static_cast<std::size_t>(agent)].size()); }
  int num_joint() const;
  int encode(const std::vector<int>& profile) const;
  std::vector<int> decode(int joint) const;
  const Distribution& row(int location, int joint) const { return table[static_cast<std::size_t>(location)][static_cast<std::size_t>(joint)]; }

  std::optional<int> agent_index(std::string_view name) const;
  std::optional<int> action_index(int agent, std::string_view name) const;
  const std::string& action_name(int agent, int action) const { return actions[static_cast<std::size_t>(agent)][static_cast<std::size_t>(action)]; }
  std::string joint_name(int joint) const;

  /// Sets every row to an empty distribution of the right shape.
  void reset_table();
};

using ArenaPtr = std::shared_ptr<const Arena>;

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const Arena& arena);

/// Channel contents on which every operation of the row is defined.
RegularSet defined_channels(const Arena& arena, int location, int joint);
/// Channel contents at `location` where `action` of `agent` is allowed.
RegularSet allowed_channels(const Arena& arena, int location, int agent, int action);
std::vector<int> allowed_actions(const Arena& arena, const State& s, int agent);
RegularSet allowed_region(const Arena& arena, int agent, int action);

/// Two-player arena: player 0 plays joint C-actions, player 1 the rest.
/// When C = Agt the opponent gets the single dummy action "_".
Arena coalition_arena(const Arena& arena, const std::vector<int>& coalition);
/// Joint action of the original arena selected by coalition actions (c, r).
std::vector<int> coalition_profile(const Arena& arena, const std::vector<int>& coalition, int c_action, int r_action);

struct LossModel {
  Rational lambda{1, 2};
};
Rational loss_probability(const LossModel& model, const std::vector<int>& w, const std::vector<int>& w2);

std::string arena_to_dot(const Arena& arena);

// ---------------------------------------------------------------------------
// Monitors

/// Deterministic monitor over target memberships, updated from each post-loss
/// state (including the initial one). State 0 is the pre-initial state.
struct Monitor {
  std::vector<RegularSet> targets;  // base state sets
  int num_states = 1;
  std::vector<int> next;            // next[state * 2^k + mask]
  std::vector<std::string> state_names;

  int num_targets() const { return static_cast<int>(targets.size()); }
  int num_masks() const { return 1 << targets.size(); }
  int step(int state, int mask) const { return next[static_cast<std::size_t>(state * num_masks() + mask)]; }
  bool trivial() const { return num_states == 1; }

  static Monitor none();
  /// One latching bit per target; state = bitmask of visited targets.
  static Monitor absorbing(std::vector<RegularSet> targets);
  /// Generalized Büchi counter (c, flag); flag is set when c wraps around.
  static Monitor buchi_counter(std::vector<RegularSet> targets);
  static Monitor product(const Monitor& a, const Monitor& b);
};

/// A two-player arena lifted by a monitor. Lifted locations are (l, m) with
/// index l * num_states + m; lifted regions live over the lifted alphabet.
class MonitoredArena {
 public:
  MonitoredArena(ArenaPtr base, Monitor monitor);

  const Arena& base() const { return *base_; }
  const ArenaPtr& base_ptr() const { return base_; }
  const Monitor& monitor() const { return monitor_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }

  int num_locations() const { return alphabet_->num_locations(); }
  int base_location(int x) const { return x / monitor_.num_states; }
  int monitor_state(int x) const { return x % monitor_.num_states; }
  int lift_location(int l, int m) const { return l * monitor_.num_states + m; }
  int num_actions(int player) const { return base_->num_actions(player); }
  int joint(int player, int action, int other) const;

  /// Channel sets (lifted alphabet) where the target-membership mask of l·μ is `mask`.
  const RegularSet& mask_guard(int l, int mask) const { return mask_guards_[static_cast<std::size_t>(l * monitor_.num_masks() + mask)]; }
  /// Channel sets where entering base location l from monitor state m yields m2.
  const RegularSet& guard(int m, int l, int m2) const;
  const RegularSet& allowed(int player, int l, int action) const;
  const RegularSet& allowed_states(int player, int action) const { return allowed_states_[static_cast<std::size_t>(player)][static_cast<std::size_t>(action)]; }

  /// Post-loss channels μ' such that entering l·μ' from monitor state m lands in B.
  RegularSet land(int m, int l, const RegularSet& lifted_b) const;
  /// Lifted states whose base part lies in a base state set, any monitor state.
  RegularSet lift(const RegularSet& base_states) const;
  /// Lifted states of the given monitor states whose base part lies in the set.
  RegularSet lift_at(const RegularSet& base_states, const std::vector<int>& monitor_states) const;
  /// Base states s whose entry image (l, step(0, mask(s)))·μ lies in the lifted set.
  RegularSet project(const RegularSet& lifted) const;
  /// Entry image of a base state.
  State entry(const State& base_state) const;
  int mask_of(const State& base_state) const;
  RegularSet universe() const { return RegularSet::universe(alphabet_, SetKind::States); }
  RegularSet channel_universe() const { return RegularSet::universe(alphabet_, SetKind::Channels); }
  /// Channel set in the lifted alphabet from one over the base alphabet.
  RegularSet rebase(const RegularSet& base_channels) const;

 private:
  ArenaPtr base_;
  Monitor monitor_;
  AlphabetPtr alphabet_;
  std::vector<RegularSet> mask_guards_;
  std::vector<RegularSet> guards_;                     // [(m * L + l) * S + m2]
  std::vector<std::vector<std::vector<RegularSet>>> allowed_;  // [player][l][action]
  std::vector<std::vector<RegularSet>> allowed_states_;        // [player][action]
};

using MonitoredArenaPtr = std::shared_ptr<const MonitoredArena>;

/// make_absorbing: lift with one latching bit per target. Returns the lifted
/// arena and the lifted targets (bit j set).
std::pair<MonitoredArenaPtr, std::vector<RegularSet>> make_absorbing(const ArenaPtr& arena, const std::vector<RegularSet>& targets);

/// Re-express a channel set over another alphabet with the same messages.
RegularSet translate_channels(const RegularSet& channels, const AlphabetPtr& to);

}  // namespace cslcg
