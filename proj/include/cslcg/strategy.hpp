#pragma once

// Finitely represented strategies and their synthesis from solver traces.
//
// A PFM strategy is an ordered list of cells (regular guard, action weights);
// the first cell whose guard holds at the last state decides, and states no
// cell covers play uniformly over their allowed actions. A counting strategy
// mixes an urgent and a fallback PFM strategy with weight p_k = 2^(-1/2^k)
// on the urgent one, k being the number of moves made so far.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cslcg/zerosum.hpp"

namespace cslcg {

using ActionWeights = std::vector<Rational>;  // one entry per action

struct StrategyCell {
  RegularSet guard;  // base state set
  ActionWeights weights;
  std::string label;
};

class PFMStrategy {
 public:
  PFMStrategy(ArenaPtr arena, int player);

  const ArenaPtr& arena() const { return arena_; }
  int player() const { return player_; }
  const std::vector<StrategyCell>& cells() const { return cells_; }

  /// Appends a cell; weights must be non-negative and sum to 1.
  void add_cell(RegularSet guard, ActionWeights weights, std::string label = {});
  /// First cell containing s; nullopt means the default cell.
  std::optional<std::size_t> cell_of(const State& s) const;
  /// Throws when the selected support contains an action not allowed at s.
  ActionWeights query(const State& s) const;
  ActionWeights query(const std::vector<State>& history) const;
  /// Cells whose support is not allowed on all of their (first-match) guard.
  std::vector<std::string> violations() const;

 private:
  ArenaPtr arena_;
  int player_;
  std::vector<StrategyCell> cells_;
};

/// p_k = 2^(-1/2^k); p_0 = 1/2 and the infinite product is 1/4.
double counting_weight(int k);

struct CountingStrategy {
  PFMStrategy urgent;
  PFMStrategy fallback;
  /// k = history.size() - 1.
  std::vector<double> query(const std::vector<State>& history) const;
};

using Strategy = std::variant<PFMStrategy, CountingStrategy>;

std::vector<double> probabilities(const Strategy& s, const std::vector<State>& history);
int strategy_player(const Strategy& s);
const ArenaPtr& strategy_arena(const Strategy& s);
PFMStrategy uniform_strategy(const ArenaPtr& arena, int player);

/// From an nz_reach/nz_until region: on each slice U_k \ U_(k-1), uniform over
/// the actions that reach U_(k-1) with positive probability against some
/// opposing action. With `determinize`, a single action that works against
/// every opposing action is used where one exists.
PFMStrategy synth_nz_reach(const Region& region, bool determinize = false);
/// From an as_reach/as_buchi region: uniform over the final Stay action sets on W.
PFMStrategy synth_as_reach(const Region& region);
/// Counting strategy for the opponent of an as_reach/as_buchi region.
/// States removed as D_k \ Y_k play, urgently, an action keeping every
/// successor outside Y_k. States removed as Y_k \ D_(k+1) urgently play the
/// action that keeps the play outside W at the current location against the
/// most actions ("hiding"). The fallback is uniform over the other allowed actions.
CountingStrategy synth_spoiler(const Region& region);

std::string serialize(const Strategy& s);
/// Guards are either automaton references or regex strings.
Strategy parse_strategy(const ArenaPtr& arena, const std::string& text);
std::string strategy_to_dot(const Strategy& s, const std::string& name = "strategy");

/// Short readable sample of a guard: its words up to the given length.
std::string describe_guard(const RegularSet& guard, int max_len = 2, std::size_t max_words = 4);

}  // namespace cslcg
