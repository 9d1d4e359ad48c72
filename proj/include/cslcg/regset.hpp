#pragma once

// Regular sets of states (L.M*) and channel contents (M*) over a combined
// location/message alphabet, with the subword orderings used by the solvers.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cslcg/automaton.hpp"

namespace cslcg {

/// Locations occupy symbols [0, |L|), messages occupy [|L|, |L|+|M|).
class Alphabet {
 public:
  Alphabet(std::vector<std::string> locations, std::vector<std::string> messages);

  int num_locations() const { return static_cast<int>(locations_.size()); }
  int num_messages() const { return static_cast<int>(messages_.size()); }
  int size() const { return num_locations() + num_messages(); }

  Symbol location(int i) const { return i; }
  Symbol message(int j) const { return num_locations() + j; }
  bool is_location(Symbol s) const { return s >= 0 && s < num_locations(); }
  bool is_message(Symbol s) const { return s >= num_locations() && s < size(); }
  int message_index(Symbol s) const { return s - num_locations(); }

  const std::string& name(Symbol s) const;
  const std::vector<std::string>& locations() const { return locations_; }
  const std::vector<std::string>& messages() const { return messages_; }
  std::optional<Symbol> find(std::string_view name) const;
  std::optional<int> find_location(std::string_view name) const;
  std::optional<int> find_message(std::string_view name) const;

  /// Splits text into symbols by longest match, ignoring whitespace.
  std::vector<Symbol> tokenize(std::string_view text) const;
  std::string render(const std::vector<Symbol>& word) const;

  bool same_as(const Alphabet& other) const;

 private:
  std::vector<std::string> locations_;
  std::vector<std::string> messages_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

enum class SetKind { States, Channels };
enum class Order { Subword, State };  // subword ⪯, and ⪯ plus same last letter

/// Channel operation: nop, push m (prepend), pop m (remove trailing m).
struct ChannelOp {
  enum class Tag { Nop, Push, Pop };
  Tag tag = Tag::Nop;
  int message = -1;  // message index, not symbol

  static ChannelOp nop() { return {}; }
  static ChannelOp push(int m) { return {Tag::Push, m}; }
  static ChannelOp pop(int m) { return {Tag::Pop, m}; }

  /// Applies the operation to a channel of message indices; nullopt if undefined.
  std::optional<std::vector<int>> apply(const std::vector<int>& channel) const;
  bool operator==(const ChannelOp&) const = default;
  auto operator<=>(const ChannelOp&) const = default;
};

/// Immutable regular language stored as a canonical minimal DFA, so equality
/// of two sets is structural equality of their automata.
class RegularSet {
 public:
  RegularSet(AlphabetPtr alphabet, SetKind kind, Dfa dfa);

  static RegularSet empty(AlphabetPtr alphabet, SetKind kind);
  static RegularSet universe(AlphabetPtr alphabet, SetKind kind);

  const AlphabetPtr& alphabet() const { return alphabet_; }
  SetKind kind() const { return kind_; }
  const Dfa& dfa() const { return *dfa_; }
  std::uint64_t digest() const { return digest_; }

  bool is_empty() const { return empty_; }
  bool accepts(const std::vector<Symbol>& word) const;

  friend bool operator==(const RegularSet& a, const RegularSet& b);

 private:
  AlphabetPtr alphabet_;
  SetKind kind_;
  std::shared_ptr<const Dfa> dfa_;
  std::uint64_t digest_ = 0;
  bool empty_ = true;
};

enum class SetOp { Union, Intersection, Difference, Complement };

struct Comparison {
  bool a_empty = false;
  bool disjoint = false;
  bool subset = false;  // A ⊆ B
  bool equal = false;
};

RegularSet from_regex(const AlphabetPtr& alphabet, std::string_view pattern, SetKind kind);
RegularSet combine(SetOp op, const RegularSet& a, const std::optional<RegularSet>& b = std::nullopt);
Comparison compare(const RegularSet& a, const RegularSet& b);
bool contains(const RegularSet& a, std::string_view word);
bool contains(const RegularSet& a, const std::vector<Symbol>& word);
RegularSet up_closure(const RegularSet& a, Order order);
RegularSet residual_location(const RegularSet& a, int location);
RegularSet op_preimage(const ChannelOp& op, const RegularSet& a);
std::vector<std::vector<Symbol>> enumerate(const RegularSet& a, int max_len);
std::string to_dot(const RegularSet& a, std::string_view name = "set");

// Shorthands used throughout the solvers.
RegularSet unite(const RegularSet& a, const RegularSet& b);
RegularSet intersect(const RegularSet& a, const RegularSet& b);
RegularSet subtract(const RegularSet& a, const RegularSet& b);
RegularSet complement(const RegularSet& a);
bool subset_of(const RegularSet& a, const RegularSet& b);

/// l . X for a channel set X.
RegularSet prefix_location(int location, const RegularSet& channels);
/// The state set  U_l  l . channels[l]; channels.size() must be |L|.
RegularSet assemble(const AlphabetPtr& alphabet, const std::vector<RegularSet>& channels);
/// Channel set M*.m or the single word, helpers for allowed regions.
RegularSet channels_ending_with(const AlphabetPtr& alphabet, int message);
RegularSet channel_word(const AlphabetPtr& alphabet, const std::vector<int>& messages);
RegularSet state_word(const AlphabetPtr& alphabet, int location, const std::vector<int>& messages);

/// Minimal elements w.r.t. the order of a set that is upward-closed for it.
/// Minimal words are shorter than the number of DFA states, so the search is finite.
std::vector<std::vector<Symbol>> minimal_elements(const RegularSet& a, Order order);

/// Direct definitions of the orderings, used by tests and oracles.
bool subword(const std::vector<int>& small, const std::vector<int>& big);
bool state_order(int loc_a, const std::vector<int>& chan_a, int loc_b, const std::vector<int>& chan_b);

}  // namespace cslcg
