#pragma once

// Explicit-state oracles: one-step Pre by enumeration of actions, outcomes and
// subwords. Independent of the symbolic solvers.

#include <optional>
#include <vector>

#include "cslcg/arena.hpp"

namespace cslcg {

/// Restrictions and frozen states applied on top of a monitored arena.
struct OracleOverlay {
  std::optional<std::vector<RegularSet>> restriction[2];
  std::optional<RegularSet> frozen;
};

/// All ⪯-subwords of a channel, without duplicates.
std::vector<std::vector<int>> subwords(const std::vector<int>& channel);

/// Actions `player` may play at a lifted state under the overlay.
std::vector<int> oracle_available(const MonitoredArena& arena, int player, const State& lifted, const OracleOverlay& overlay = {});

/// Every opposing available action is answered by some available action of
/// `player` that lands in B with positive probability. B is a lifted state set.
bool oracle_pre(const MonitoredArena& arena, int player, const RegularSet& b, const State& lifted, const OracleOverlay& overlay = {});
bool oracle_pre(const Arena& two_player, int player, const RegularSet& b, const State& s);

/// Lifted successors with positive probability of a joint action (empty when
/// the row is undefined at the state).
std::vector<State> oracle_successors(const MonitoredArena& arena, const State& lifted, int joint);

}  // namespace cslcg
