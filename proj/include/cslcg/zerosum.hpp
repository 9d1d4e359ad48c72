#pragma once

// Two-player (2.5-player with losses) zero-sum solving over regular state sets:
// the Pre operator, positive reachability, Stay restrictions, almost-sure
// (repeated) reachability and the dual safety regions.
//
// All sets are lifted state sets over the view's alphabet. With a trivial
// monitor the lifted alphabet is the base alphabet.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cslcg/arena.hpp"

namespace cslcg {

/// A monitored arena seen through optional per-action restrictions of either
/// player and an optional frozen set (states that are never left; used to make
/// reachability targets absorbing without lifting).
class GameView {
 public:
  explicit GameView(MonitoredArenaPtr arena);
  static GameView of(const ArenaPtr& two_player);

  const MonitoredArena& arena() const { return *shared_->arena; }
  const MonitoredArenaPtr& arena_ptr() const { return shared_->arena; }
  const AlphabetPtr& alphabet() const { return shared_->arena->alphabet(); }
  int num_locations() const { return shared_->arena->num_locations(); }
  int num_actions(int player) const { return shared_->arena->num_actions(player); }

  /// Restricts `player` to per-action state sets (replacing any earlier restriction).
  GameView restricted(int player, std::vector<RegularSet> per_action) const;
  GameView frozen(const RegularSet& states) const;

  const std::optional<std::vector<RegularSet>>& restriction(int player) const { return restriction_[static_cast<std::size_t>(player)]; }
  const std::optional<RegularSet>& frozen_set() const { return frozen_; }

  /// Channels at lifted location x where `action` may be played.
  const RegularSet& available(int player, int x, int action) const;
  RegularSet available_states(int player, int action) const;
  /// Channels at x where both players have some available action.
  const RegularSet& domain(int x) const { return dom_[static_cast<std::size_t>(x)]; }
  RegularSet domain() const;
  /// Frozen channels at x (empty when nothing is frozen).
  const RegularSet& frozen_at(int x) const { return frozen_at_[static_cast<std::size_t>(x)]; }
  /// Lifted channels at x on which every operation of the joint row is defined.
  const RegularSet& defined(int x, int joint) const;

 private:
  struct Shared {
    MonitoredArenaPtr arena;
    std::vector<RegularSet> defined;  // [base location][joint]
  };
  void rebuild();

  std::shared_ptr<const Shared> shared_;
  std::optional<std::vector<RegularSet>> restriction_[2];
  std::optional<RegularSet> frozen_;
  std::vector<std::vector<std::vector<RegularSet>>> avail_;  // [player][x][action]
  std::vector<RegularSet> dom_;
  std::vector<RegularSet> frozen_at_;
};

struct TraceStep {
  std::string name;  // "U", "D", "Y", "C"
  int iteration = 0;
  RegularSet set;
};

struct FixpointTrace {
  std::string algorithm;  // "nz_reach" or "as_buchi"
  int player = 0;
  std::vector<TraceStep> steps;
  /// Restriction overlay A_k per pass of the almost-sure loop (A_0 is the input view).
  std::vector<GameView> views;

  std::vector<RegularSet> series(const std::string& name) const;
  /// Passes of the almost-sure loop, or strict growth steps of the positive-reachability iteration.
  int iterations() const;
};

struct Region {
  RegularSet winning;
  int player = 0;
  std::string objective;
  FixpointTrace trace;
  /// For dual regions (as_safe, nz_safe) the trace belongs to the opponent.
  bool dual = false;
};

/// Pre_i(B): states from which i, playing uniformly over its available
/// actions, reaches B with positive probability against every opposing action.
RegularSet pre(const GameView& view, int player, const RegularSet& b);

/// Positive-probability successor test used by pre, stay and synthesis: the
/// channels at x from which joint (α for player, β for the opponent) lands in
/// B with positive probability.
class PostCache {
 public:
  PostCache(const GameView& view, const RegularSet& b);
  const RegularSet& post(int x, int joint);

 private:
  const RegularSet& landing(int m, int l2);
  const GameView& view_;
  RegularSet b_;
  std::vector<std::optional<RegularSet>> land_;  // [m * L + l2], ⪯-upward closed
  std::vector<std::optional<RegularSet>> post_;  // [x * J + joint]
};

Region nz_reach(const GameView& view, int player, const RegularSet& target);
/// Positive reachability of the target along paths that stay in `within`.
Region nz_until(const GameView& view, int player, const std::optional<RegularSet>& within, const RegularSet& target);
Region as_safe(const GameView& view, int player, const RegularSet& safe);
/// Per-action restriction of `player` keeping every one-step successor in R.
GameView stay(const GameView& view, int player, const RegularSet& r);
Region as_buchi(const GameView& view, int player, const RegularSet& target);
/// Almost-sure reachability: the target is frozen, then the Büchi loop runs.
Region as_reach(const GameView& view, int player, const RegularSet& target);
Region nz_safe(const GameView& view, int player, const RegularSet& safe);

}  // namespace cslcg
