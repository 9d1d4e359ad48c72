#pragma once

// Plain finite automata over symbol indices 0..n-1. RegularSet wraps these
// with an alphabet and keeps every language in canonical minimal form.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace cslcg {

using Symbol = int;

/// Complete deterministic automaton; state 0 is initial.
struct Dfa {
  int num_symbols = 0;
  std::vector<int> delta;      // delta[state * num_symbols + symbol]
  std::vector<char> accepting;

  int num_states() const { return static_cast<int>(accepting.size()); }
  int next(int state, Symbol s) const { return delta[static_cast<std::size_t>(state) * num_symbols + s]; }
  int run(int state, const std::vector<Symbol>& word) const;

  bool operator==(const Dfa&) const = default;
};

/// Nondeterministic automaton with epsilon moves (symbol -1).
struct Nfa {
  static constexpr Symbol kEpsilon = -1;

  int num_symbols = 0;
  std::vector<std::vector<std::pair<Symbol, int>>> out;
  std::vector<int> initial;
  std::vector<char> accepting;

  int add_state(bool accept = false);
  void add_edge(int from, Symbol s, int to) { out[static_cast<std::size_t>(from)].emplace_back(s, to); }
  int num_states() const { return static_cast<int>(out.size()); }

  static Nfa from_dfa(const Dfa& dfa);
};

/// Subset construction; the result is complete but not minimal.
Dfa determinize(const Nfa& nfa);

/// Minimal complete DFA with states renumbered in breadth-first symbol order.
/// Two DFAs accept the same language iff their canonical forms are equal.
Dfa canonicalize(const Dfa& dfa);

enum class ProductOp { Union, Intersection, Difference };
Dfa product(const Dfa& a, const Dfa& b, ProductOp op);

Dfa complement_dfa(const Dfa& dfa);

/// Hash of the canonical structure.
std::uint64_t digest(const Dfa& dfa);

}  // namespace cslcg
