#pragma once

// Conjunctions of qualitative objectives AS/NZ of F R, G R and GF R, their
// textual syntax, negation into disjunctive normal form, fragment checks and
// the restriction pipeline that solves a conjunction for one player.
//
// Objective syntax:
//   formula := conj ('||' conj)*
//   conj    := atom ('&' atom)*
//   atom    := ('AS' | 'NZ') ('F' | 'G' | 'GF') ['!'] string
// where string is a regular state set in double or single quotes and '!'
// takes its complement.

#include <string>
#include <string_view>
#include <vector>

#include "cslcg/zerosum.hpp"

namespace cslcg {

enum class Quantifier { AS, NZ };
enum class PathKind { Eventually, Always, Repeatedly };

struct Objective {
  Quantifier quantifier = Quantifier::AS;
  PathKind path = PathKind::Eventually;
  RegularSet target;
  std::string text;  // regex source, '!'-prefixed when complemented
};

struct Conjunction {
  std::vector<Objective> atoms;
};

/// Disjunction of conjunctions.
struct Formula {
  std::vector<Conjunction> disjuncts;
  bool single() const { return disjuncts.size() == 1; }
};

Formula parse_objective(const AlphabetPtr& alphabet, std::string_view text);
std::string to_string(const Objective& o);
std::string to_string(const Conjunction& c);
std::string to_string(const Formula& f);

/// ¬AS F R = NZ G ¬R, ¬AS G R = NZ F ¬R and duals. AS GF has no negation in
/// the fragment (FragmentError).
Objective negate(const Objective& o);
Formula negate(const Formula& f);
/// Conjunction of two formulas, distributed into disjunctive normal form.
Formula conjoin(const Formula& a, const Formula& b);
Formula formula_of(const Conjunction& c);

/// Cheap contradictions between atoms (an empty target, AS G S with a
/// disjoint NZ F / AS F target, AS F R with a disjoint NZ G set).
bool syntactically_inconsistent(const Conjunction& c);
/// Throws FragmentError naming the violated rule. `one_and_half` admits
/// conjunctions with AS GF atoms.
void check_fragment(const Conjunction& c, bool one_and_half);

/// A game is 1.5-player for `player` when the opponent has a single action.
bool is_one_and_half(const Arena& two_player, int player);
bool initial_in(const Arena& arena, const RegularSet& base_states);

/// Lift by a generalized Büchi counter. With one target the arena is lifted
/// trivially and the target is returned unchanged.
std::pair<MonitoredArenaPtr, RegularSet> buchi_degeneralize(const ArenaPtr& two_player, const std::vector<RegularSet>& targets);

struct NzBoxElimination {
  RegularSet target;  // R′ over lifted states
  Region region;      // NZ(safe U R′)
};
/// Replaces NZ G safe by positive reachability of R′ = (states where NZ G safe
/// is still winnable on the restricted view) ∩ done, along paths inside safe.
NzBoxElimination eliminate_nz_box(const GameView& restricted, int player, const RegularSet& safe, const RegularSet& done);

struct ConjunctionRegion {
  RegularSet winning;           // base states (monitor bits cleared at entry)
  RegularSet lifted_winning;
  GameView view;                // final restricted view
  std::vector<Region> parts;    // component regions in pipeline order
  bool inconsistent = false;
};

ConjunctionRegion solve_conjunction(const ArenaPtr& two_player, int player, const Conjunction& phi);
/// Disjunctions are admitted when every disjunct is a single NZ atom (positive
/// probability distributes over unions of path sets).
ConjunctionRegion solve_formula(const ArenaPtr& two_player, int player, const Formula& phi);

}  // namespace cslcg
