#include "cslcg/regset.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cslcg/error.hpp"

namespace cslcg {

// ---------------------------------------------------------------------------
// Alphabet

namespace {

bool valid_symbol_name(const std::string& name) {
  if (name.empty() || name == "L" || name == "M") return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '#' || c == '\'' || c == '-';
  });
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> locations, std::vector<std::string> messages)
    : locations_(std::move(locations)), messages_(std::move(messages)) {
  if (locations_.empty()) throw ModelError("alphabet needs at least one location");
  if (messages_.empty()) throw ModelError("alphabet needs at least one message");
  std::set<std::string> seen;
  for (const auto* group : {&locations_, &messages_})
    for (const auto& n : *group) {
      if (!valid_symbol_name(n)) throw ModelError("invalid symbol name '" + n + "'");
      if (!seen.insert(n).second) throw ModelError("symbol '" + n + "' declared twice");
    }
}

const std::string& Alphabet::name(Symbol s) const {
  return is_location(s) ? locations_[static_cast<std::size_t>(s)]
                        : messages_[static_cast<std::size_t>(message_index(s))];
}

std::optional<Symbol> Alphabet::find(std::string_view n) const {
  if (auto l = find_location(n)) return location(*l);
  if (auto m = find_message(n)) return message(*m);
  return std::nullopt;
}

std::optional<int> Alphabet::find_location(std::string_view n) const {
  for (int i = 0; i < num_locations(); ++i)
    if (locations_[static_cast<std::size_t>(i)] == n) return i;
  return std::nullopt;
}

std::optional<int> Alphabet::find_message(std::string_view n) const {
  for (int i = 0; i < num_messages(); ++i)
    if (messages_[static_cast<std::size_t>(i)] == n) return i;
  return std::nullopt;
}

std::vector<Symbol> Alphabet::tokenize(std::string_view text) const {
  std::vector<Symbol> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    std::size_t best = 0;
    Symbol best_sym = -1;
    for (Symbol s = 0; s < size(); ++s) {
      const auto& n = name(s);
      if (n.size() > best && text.substr(pos, n.size()) == n) {
        best = n.size();
        best_sym = s;
      }
    }
    if (best == 0) throw SyntaxError("unknown symbol in '" + std::string(text) + "'", pos);
    out.push_back(best_sym);
    pos += best;
  }
  return out;
}

std::string Alphabet::render(const std::vector<Symbol>& word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += name(word[i]);
  }
  return out;
}

bool Alphabet::same_as(const Alphabet& other) const {
  return this == &other || (locations_ == other.locations_ && messages_ == other.messages_);
}

std::optional<std::vector<int>> ChannelOp::apply(const std::vector<int>& channel) const {
  switch (tag) {
    case Tag::Nop:
      return channel;
    case Tag::Push: {
      std::vector<int> out;
      out.reserve(channel.size() + 1);
      out.push_back(message);
      out.insert(out.end(), channel.begin(), channel.end());
      return out;
    }
    case Tag::Pop:
      if (channel.empty() || channel.back() != message) return std::nullopt;
      return std::vector<int>(channel.begin(), channel.end() - 1);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RegularSet

namespace {

Dfa universe_dfa(const Alphabet& a, SetKind kind) {
  Dfa d;
  d.num_symbols = a.size();
  if (kind == SetKind::Channels) {
    // 0: accepting, loops on messages; 1: sink
    d.accepting = {1, 0};
    d.delta.assign(static_cast<std::size_t>(2 * a.size()), 1);
    for (int m = 0; m < a.num_messages(); ++m) d.delta[a.message(m)] = 0;
  } else {
    // 0: initial, 1: after location, 2: sink
    d.accepting = {0, 1, 0};
    d.delta.assign(static_cast<std::size_t>(3 * a.size()), 2);
    for (int l = 0; l < a.num_locations(); ++l) d.delta[a.location(l)] = 1;
    for (int m = 0; m < a.num_messages(); ++m) d.delta[a.size() + a.message(m)] = 1;
  }
  return d;
}

Dfa empty_dfa(const Alphabet& a) {
  Dfa d;
  d.num_symbols = a.size();
  d.accepting = {0};
  d.delta.assign(static_cast<std::size_t>(a.size()), 0);
  return d;
}

void check_same(const RegularSet& a, const RegularSet& b) {
  if (!a.alphabet()->same_as(*b.alphabet())) throw MismatchError("regular sets over different alphabets");
  if (a.kind() != b.kind()) throw MismatchError("regular sets of different kinds");
}

Dfa with_initial(const Dfa& dfa, int q) {
  if (q == 0) return dfa;
  Dfa out = dfa;
  auto swap_id = [q](int s) { return s == 0 ? q : s == q ? 0 : s; };
  for (int s = 0; s < dfa.num_states(); ++s) {
    int t = swap_id(s);
    out.accepting[t] = dfa.accepting[s];
    for (Symbol c = 0; c < dfa.num_symbols; ++c)
      out.delta[static_cast<std::size_t>(t) * dfa.num_symbols + c] = swap_id(dfa.next(s, c));
  }
  return out;
}

}  // namespace

RegularSet::RegularSet(AlphabetPtr alphabet, SetKind kind, Dfa dfa)
    : alphabet_(std::move(alphabet)), kind_(kind) {
  if (dfa.num_symbols != alphabet_->size()) throw MismatchError("automaton alphabet size mismatch");
  Dfa canon = canonicalize(dfa);
  empty_ = std::none_of(canon.accepting.begin(), canon.accepting.end(), [](char c) { return c != 0; });
  digest_ = cslcg::digest(canon) ^ (kind == SetKind::States ? 0x5bd1e995ULL : 0);
  dfa_ = std::make_shared<const Dfa>(std::move(canon));
}

RegularSet RegularSet::empty(AlphabetPtr alphabet, SetKind kind) {
  Dfa d = empty_dfa(*alphabet);
  return RegularSet(std::move(alphabet), kind, std::move(d));
}

RegularSet RegularSet::universe(AlphabetPtr alphabet, SetKind kind) {
  Dfa d = universe_dfa(*alphabet, kind);
  return RegularSet(std::move(alphabet), kind, std::move(d));
}

bool RegularSet::accepts(const std::vector<Symbol>& word) const {
  return dfa_->accepting[dfa_->run(0, word)] != 0;
}

bool operator==(const RegularSet& a, const RegularSet& b) {
  check_same(a, b);
  return a.digest_ == b.digest_ && *a.dfa_ == *b.dfa_;
}

// ---------------------------------------------------------------------------
// Regular expressions

namespace {

struct Regex {
  enum class Kind { Epsilon, Symbols, Concat, Alt, Star, Repeat };
  Kind kind = Kind::Epsilon;
  std::vector<Symbol> symbols;
  std::vector<Regex> children;
  int min = 0, max = -1;  // Repeat; max < 0 is unbounded
};

class RegexParser {
 public:
  RegexParser(const Alphabet& alphabet, std::string_view text) : a_(alphabet), text_(text) {}

  Regex parse() {
    Regex r = alternation();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return r;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  Regex alternation() {
    Regex first = concatenation();
    if (!peek('|')) return first;
    Regex alt;
    alt.kind = Regex::Kind::Alt;
    alt.children.push_back(std::move(first));
    while (peek('|')) {
      ++pos_;
      alt.children.push_back(concatenation());
    }
    return alt;
  }

  bool starts_atom() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c != '|' && c != ')' && c != '*' && c != '+' && c != '?' && c != '{' && c != '}';
  }

  Regex concatenation() {
    Regex seq;
    seq.kind = Regex::Kind::Concat;
    for (;;) {
      if (peek('.')) {
        ++pos_;
        if (!starts_atom()) throw SyntaxError("expected expression after '.'", pos_);
      }
      if (!starts_atom()) break;
      seq.children.push_back(repetition());
    }
    if (seq.children.empty()) return Regex{};  // epsilon
    if (seq.children.size() == 1) return std::move(seq.children.front());
    return seq;
  }

  int number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError("expected a number", pos_);
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  Regex repetition() {
    Regex r = atom();
    for (;;) {
      if (peek('*') || peek('+') || peek('?')) {
        char c = text_[pos_++];
        Regex w;
        w.kind = Regex::Kind::Repeat;
        w.min = c == '+' ? 1 : 0;
        w.max = c == '?' ? 1 : -1;
        w.children.push_back(std::move(r));
        r = std::move(w);
      } else if (peek('{')) {
        ++pos_;
        Regex w;
        w.kind = Regex::Kind::Repeat;
        w.min = number();
        w.max = w.min;
        if (peek(',')) {
          ++pos_;
          skip_ws();
          w.max = peek('}') ? -1 : number();
        }
        if (!peek('}')) throw SyntaxError("expected '}'", pos_);
        ++pos_;
        if (w.max >= 0 && w.max < w.min) throw SyntaxError("bad repetition bounds", pos_);
        w.children.push_back(std::move(r));
        r = std::move(w);
      } else {
        return r;
      }
    }
  }

  Regex atom() {
    skip_ws();
    if (peek('(')) {
      ++pos_;
      Regex inner = alternation();
      if (!peek(')')) throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    // Longest match among declared symbols and the classes L and M.
    std::size_t best = 0;
    Regex r;
    r.kind = Regex::Kind::Symbols;
    for (Symbol s = 0; s < a_.size(); ++s) {
      const auto& n = a_.name(s);
      if (n.size() > best && text_.substr(pos_, n.size()) == n) {
        best = n.size();
        r.symbols = {s};
      }
    }
    if (best == 0 && pos_ < text_.size() && (text_[pos_] == 'L' || text_[pos_] == 'M')) {
      best = 1;
      r.symbols.clear();
      if (text_[pos_] == 'L')
        for (int l = 0; l < a_.num_locations(); ++l) r.symbols.push_back(a_.location(l));
      else
        for (int m = 0; m < a_.num_messages(); ++m) r.symbols.push_back(a_.message(m));
    }
    if (best == 0) throw SyntaxError("undeclared symbol", pos_);
    pos_ += best;
    return r;
  }

  const Alphabet& a_;
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Thompson construction; returns (entry, exit).
std::pair<int, int> build(Nfa& nfa, const Regex& r) {
  int in = nfa.add_state(), out = nfa.add_state();
  switch (r.kind) {
    case Regex::Kind::Epsilon:
      nfa.add_edge(in, Nfa::kEpsilon, out);
      break;
    case Regex::Kind::Symbols:
      for (Symbol s : r.symbols) nfa.add_edge(in, s, out);
      break;
    case Regex::Kind::Concat: {
      int cur = in;
      for (const auto& c : r.children) {
        auto [ci, co] = build(nfa, c);
        nfa.add_edge(cur, Nfa::kEpsilon, ci);
        cur = co;
      }
      nfa.add_edge(cur, Nfa::kEpsilon, out);
      break;
    }
    case Regex::Kind::Alt:
      for (const auto& c : r.children) {
        auto [ci, co] = build(nfa, c);
        nfa.add_edge(in, Nfa::kEpsilon, ci);
        nfa.add_edge(co, Nfa::kEpsilon, out);
      }
      break;
    case Regex::Kind::Star:
    case Regex::Kind::Repeat: {
      const Regex& body = r.children.front();
      int cur = in;
      for (int i = 0; i < r.min; ++i) {
        auto [ci, co] = build(nfa, body);
        nfa.add_edge(cur, Nfa::kEpsilon, ci);
        cur = co;
      }
      if (r.max < 0) {
        auto [ci, co] = build(nfa, body);
        nfa.add_edge(cur, Nfa::kEpsilon, ci);
        nfa.add_edge(co, Nfa::kEpsilon, ci);
        nfa.add_edge(co, Nfa::kEpsilon, out);
      } else {
        for (int i = r.min; i < r.max; ++i) {
          nfa.add_edge(cur, Nfa::kEpsilon, out);
          auto [ci, co] = build(nfa, body);
          nfa.add_edge(cur, Nfa::kEpsilon, ci);
          cur = co;
        }
      }
      nfa.add_edge(cur, Nfa::kEpsilon, out);
      break;
    }
  }
  return {in, out};
}

}  // namespace

RegularSet from_regex(const AlphabetPtr& alphabet, std::string_view pattern, SetKind kind) {
  Regex r = RegexParser(*alphabet, pattern).parse();
  Nfa nfa;
  nfa.num_symbols = alphabet->size();
  auto [in, out] = build(nfa, r);
  nfa.initial = {in};
  nfa.accepting[static_cast<std::size_t>(out)] = 1;
  RegularSet raw(alphabet, kind, determinize(nfa));
  RegularSet shaped = intersect(raw, RegularSet::universe(alphabet, kind));
  if (!(shaped == raw)) {
    throw SyntaxError(kind == SetKind::States ? "state-set pattern admits words outside L.M*"
                                              : "channel-set pattern admits words outside M*",
                      0);
  }
  return shaped;
}

// ---------------------------------------------------------------------------
// Boolean operations and comparisons

RegularSet combine(SetOp op, const RegularSet& a, const std::optional<RegularSet>& b) {
  if (op == SetOp::Complement) {
    RegularSet u = RegularSet::universe(a.alphabet(), a.kind());
    return RegularSet(a.alphabet(), a.kind(), product(u.dfa(), a.dfa(), ProductOp::Difference));
  }
  if (!b) throw MismatchError("binary set operation needs two operands");
  check_same(a, *b);
  ProductOp p = op == SetOp::Union          ? ProductOp::Union
                : op == SetOp::Intersection ? ProductOp::Intersection
                                            : ProductOp::Difference;
  return RegularSet(a.alphabet(), a.kind(), product(a.dfa(), b->dfa(), p));
}

RegularSet unite(const RegularSet& a, const RegularSet& b) {
  if (a.is_empty() && a.kind() == b.kind()) return b;
  if (b.is_empty() && a.kind() == b.kind()) return a;
  return combine(SetOp::Union, a, b);
}
RegularSet intersect(const RegularSet& a, const RegularSet& b) { return combine(SetOp::Intersection, a, b); }
RegularSet subtract(const RegularSet& a, const RegularSet& b) { return combine(SetOp::Difference, a, b); }
RegularSet complement(const RegularSet& a) { return combine(SetOp::Complement, a); }
bool subset_of(const RegularSet& a, const RegularSet& b) { return subtract(a, b).is_empty(); }

Comparison compare(const RegularSet& a, const RegularSet& b) {
  check_same(a, b);
  Comparison c;
  c.a_empty = a.is_empty();
  c.disjoint = intersect(a, b).is_empty();
  c.subset = subset_of(a, b);
  c.equal = a == b;
  return c;
}

namespace {

void check_word_shape(const RegularSet& a, const std::vector<Symbol>& word) {
  const Alphabet& al = *a.alphabet();
  std::size_t start = 0;
  if (a.kind() == SetKind::States) {
    if (word.empty() || !al.is_location(word.front())) throw SyntaxError("state word must start with a location", 0);
    start = 1;
  }
  for (std::size_t i = start; i < word.size(); ++i)
    if (!al.is_message(word[i])) throw SyntaxError("expected a message symbol", i);
}

}  // namespace

bool contains(const RegularSet& a, const std::vector<Symbol>& word) {
  check_word_shape(a, word);
  return a.accepts(word);
}

bool contains(const RegularSet& a, std::string_view word) { return contains(a, a.alphabet()->tokenize(word)); }

// ---------------------------------------------------------------------------
// Closures, residuals, preimages

RegularSet up_closure(const RegularSet& a, Order order) {
  const Alphabet& al = *a.alphabet();
  const Dfa& d = a.dfa();
  if (order == Order::Subword) {
    Nfa nfa = Nfa::from_dfa(d);
    for (int q = 0; q < nfa.num_states(); ++q)
      for (int m = 0; m < al.num_messages(); ++m) nfa.add_edge(q, al.message(m), q);
    RegularSet raw(a.alphabet(), a.kind(), determinize(nfa));
    return intersect(raw, RegularSet::universe(a.alphabet(), a.kind()));
  }
  if (a.kind() != SetKind::States) throw MismatchError("state order applies only to state sets");
  // Per location block: insertions anywhere except after the final letter, which
  // must be a genuine transition of the original automaton.
  const int n = d.num_states();
  Nfa nfa;
  nfa.num_symbols = al.size();
  int init = nfa.add_state();
  for (int q = 0; q < n; ++q) nfa.add_state(d.accepting[q] != 0);  // entry E_q = 1 + q
  for (int q = 0; q < n; ++q) nfa.add_state(false);                 // free F_q = 1 + n + q
  for (int q = 0; q < n; ++q) nfa.add_state(d.accepting[q] != 0);  // last C_q = 1 + 2n + q
  auto E = [&](int q) { return 1 + q; };
  auto F = [&](int q) { return 1 + n + q; };
  auto C = [&](int q) { return 1 + 2 * n + q; };
  nfa.initial = {init};
  for (int l = 0; l < al.num_locations(); ++l) nfa.add_edge(init, al.location(l), E(d.next(0, al.location(l))));
  for (int q = 0; q < n; ++q)
    for (int m = 0; m < al.num_messages(); ++m) {
      Symbol s = al.message(m);
      int t = d.next(q, s);
      for (int src : {E(q), F(q)}) {
        nfa.add_edge(src, s, F(q));
        nfa.add_edge(src, s, F(t));
        nfa.add_edge(src, s, C(t));
      }
    }
  RegularSet raw(a.alphabet(), a.kind(), determinize(nfa));
  return intersect(raw, RegularSet::universe(a.alphabet(), a.kind()));
}

RegularSet residual_location(const RegularSet& a, int location) {
  if (a.kind() != SetKind::States) throw MismatchError("residual needs a state set");
  const Dfa& d = a.dfa();
  RegularSet raw(a.alphabet(), SetKind::Channels, with_initial(d, d.next(0, a.alphabet()->location(location))));
  return intersect(raw, RegularSet::universe(a.alphabet(), SetKind::Channels));
}

RegularSet op_preimage(const ChannelOp& op, const RegularSet& a) {
  if (a.kind() != SetKind::Channels) throw MismatchError("channel operation preimage needs a channel set");
  const Alphabet& al = *a.alphabet();
  const Dfa& d = a.dfa();
  switch (op.tag) {
    case ChannelOp::Tag::Nop:
      return a;
    case ChannelOp::Tag::Push: {
      RegularSet raw(a.alphabet(), SetKind::Channels, with_initial(d, d.next(0, al.message(op.message))));
      return intersect(raw, RegularSet::universe(a.alphabet(), SetKind::Channels));
    }
    case ChannelOp::Tag::Pop: {
      Nfa nfa = Nfa::from_dfa(d);
      int fin = nfa.add_state(true);
      for (int q = 0; q < d.num_states(); ++q) {
        nfa.accepting[static_cast<std::size_t>(q)] = 0;
        if (d.accepting[q]) nfa.add_edge(q, al.message(op.message), fin);
      }
      RegularSet raw(a.alphabet(), SetKind::Channels, determinize(nfa));
      return intersect(raw, RegularSet::universe(a.alphabet(), SetKind::Channels));
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Enumeration and export

std::vector<std::vector<Symbol>> enumerate(const RegularSet& a, int max_len) {
  const Dfa& d = a.dfa();
  const Alphabet& al = *a.alphabet();
  const int n = d.num_states();
  // live[q]: an accepting state is reachable from q
  std::vector<char> live(static_cast<std::size_t>(n), 0);
  for (int q = 0; q < n; ++q) live[q] = d.accepting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      if (live[q]) continue;
      for (Symbol s = 0; s < d.num_symbols; ++s)
        if (live[d.next(q, s)]) {
          live[q] = 1;
          changed = true;
          break;
        }
    }
  }
  std::vector<std::vector<Symbol>> out;
  if (!live[0]) return out;
  const int offset = a.kind() == SetKind::States ? 1 : 0;
  std::vector<Symbol> word;
  std::function<void(int, int)> dfs = [&](int q, int remaining) {
    if (remaining == 0) {
      if (d.accepting[q]) out.push_back(word);
      return;
    }
    for (Symbol s = 0; s < d.num_symbols; ++s) {
      bool first = static_cast<int>(word.size()) < offset;
      if (first ? !al.is_location(s) : !al.is_message(s)) continue;
      int t = d.next(q, s);
      if (!live[t]) continue;
      word.push_back(s);
      dfs(t, remaining - 1);
      word.pop_back();
    }
  };
  for (int len = 0; len <= max_len; ++len) dfs(0, len + offset);
  return out;
}

std::string to_dot(const RegularSet& a, std::string_view name) {
  const Dfa& d = a.dfa();
  const Alphabet& al = *a.alphabet();
  std::vector<char> live(static_cast<std::size_t>(d.num_states()), 0);
  for (int q = 0; q < d.num_states(); ++q) live[q] = d.accepting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < d.num_states(); ++q)
      for (Symbol s = 0; s < d.num_symbols && !live[q]; ++s)
        if (live[d.next(q, s)]) live[q] = changed = true;
  }
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=LR;\n  init [shape=point];\n  init -> q0;\n";
  for (int q = 0; q < d.num_states(); ++q) {
    if (!live[q]) continue;
    os << "  q" << q << " [shape=" << (d.accepting[q] ? "doublecircle" : "circle") << "];\n";
  }
  for (int q = 0; q < d.num_states(); ++q) {
    if (!live[q]) continue;
    std::map<int, std::string> labels;
    for (Symbol s = 0; s < d.num_symbols; ++s) {
      int t = d.next(q, s);
      if (!live[t]) continue;
      auto& lbl = labels[t];
      if (!lbl.empty()) lbl += ",";
      lbl += al.name(s);
    }
    for (const auto& [t, lbl] : labels) os << "  q" << q << " -> q" << t << " [label=\"" << lbl << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Construction helpers

RegularSet prefix_location(int location, const RegularSet& channels) {
  if (channels.kind() != SetKind::Channels) throw MismatchError("prefix_location needs a channel set");
  const Alphabet& al = *channels.alphabet();
  Nfa nfa = Nfa::from_dfa(channels.dfa());
  int init = nfa.add_state();
  nfa.add_edge(init, al.location(location), 0);
  nfa.initial = {init};
  RegularSet raw(channels.alphabet(), SetKind::States, determinize(nfa));
  return intersect(raw, RegularSet::universe(channels.alphabet(), SetKind::States));
}

RegularSet assemble(const AlphabetPtr& alphabet, const std::vector<RegularSet>& channels) {
  if (static_cast<int>(channels.size()) != alphabet->num_locations())
    throw MismatchError("assemble needs one channel set per location");
  Nfa nfa;
  nfa.num_symbols = alphabet->size();
  int init = nfa.add_state();
  nfa.initial = {init};
  for (int l = 0; l < alphabet->num_locations(); ++l) {
    const RegularSet& c = channels[static_cast<std::size_t>(l)];
    if (c.kind() != SetKind::Channels || !c.alphabet()->same_as(*alphabet))
      throw MismatchError("assemble operands must be channel sets over the same alphabet");
    if (c.is_empty()) continue;
    const Dfa& d = c.dfa();
    int base = nfa.num_states();
    for (int q = 0; q < d.num_states(); ++q) nfa.add_state(d.accepting[q] != 0);
    for (int q = 0; q < d.num_states(); ++q)
      for (Symbol s = 0; s < d.num_symbols; ++s) nfa.add_edge(base + q, s, base + d.next(q, s));
    nfa.add_edge(init, alphabet->location(l), base);
  }
  RegularSet raw(alphabet, SetKind::States, determinize(nfa));
  return intersect(raw, RegularSet::universe(alphabet, SetKind::States));
}

RegularSet channels_ending_with(const AlphabetPtr& alphabet, int message) {
  return op_preimage(ChannelOp::pop(message), RegularSet::universe(alphabet, SetKind::Channels));
}

RegularSet channel_word(const AlphabetPtr& alphabet, const std::vector<int>& messages) {
  Nfa nfa;
  nfa.num_symbols = alphabet->size();
  int cur = nfa.add_state();
  nfa.initial = {cur};
  for (int m : messages) {
    int nxt = nfa.add_state();
    nfa.add_edge(cur, alphabet->message(m), nxt);
    cur = nxt;
  }
  nfa.accepting[static_cast<std::size_t>(cur)] = 1;
  return RegularSet(alphabet, SetKind::Channels, determinize(nfa));
}

RegularSet state_word(const AlphabetPtr& alphabet, int location, const std::vector<int>& messages) {
  return prefix_location(location, channel_word(alphabet, messages));
}

// ---------------------------------------------------------------------------
// Orders

bool subword(const std::vector<int>& small, const std::vector<int>& big) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < big.size() && i < small.size(); ++j)
    if (big[j] == small[i]) ++i;
  return i == small.size();
}

bool state_order(int loc_a, const std::vector<int>& chan_a, int loc_b, const std::vector<int>& chan_b) {
  if (loc_a != loc_b || !subword(chan_a, chan_b)) return false;
  if (chan_a.empty() || chan_b.empty()) return chan_a.empty() && chan_b.empty();
  return chan_a.back() == chan_b.back();
}

std::vector<std::vector<Symbol>> minimal_elements(const RegularSet& a, Order order) {
  const Alphabet& al = *a.alphabet();
  auto members = enumerate(a, a.dfa().num_states());
  auto split = [&](const std::vector<Symbol>& w, int& loc, std::vector<int>& chan) {
    std::size_t start = 0;
    loc = 0;
    if (a.kind() == SetKind::States) {
      loc = w.front();
      start = 1;
    }
    chan.clear();
    for (std::size_t i = start; i < w.size(); ++i) chan.push_back(al.message_index(w[i]));
  };
  auto leq = [&](const std::vector<Symbol>& x, const std::vector<Symbol>& y) {
    int lx, ly;
    std::vector<int> cx, cy;
    split(x, lx, cx);
    split(y, ly, cy);
    if (order == Order::State) return state_order(lx, cx, ly, cy);
    return lx == ly && subword(cx, cy);
  };
  std::vector<std::vector<Symbol>> out;
  for (const auto& w : members) {
    bool minimal = std::none_of(members.begin(), members.end(),
                                [&](const std::vector<Symbol>& v) { return v != w && leq(v, w); });
    if (minimal) out.push_back(w);
  }
  return out;
}

}  // namespace cslcg
