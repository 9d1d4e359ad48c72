#include "cslcg/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace cslcg {

int Dfa::run(int state, const std::vector<Symbol>& word) const {
  for (Symbol s : word) state = next(state, s);
  return state;
}

int Nfa::add_state(bool accept) {
  out.emplace_back();
  accepting.push_back(accept ? 1 : 0);
  return num_states() - 1;
}

Nfa Nfa::from_dfa(const Dfa& dfa) {
  Nfa nfa;
  nfa.num_symbols = dfa.num_symbols;
  for (int q = 0; q < dfa.num_states(); ++q) nfa.add_state(dfa.accepting[q] != 0);
  for (int q = 0; q < dfa.num_states(); ++q)
    for (Symbol s = 0; s < dfa.num_symbols; ++s) nfa.add_edge(q, s, dfa.next(q, s));
  nfa.initial = {0};
  return nfa;
}

namespace {

std::vector<int> eps_closure(const Nfa& nfa, std::vector<int> states) {
  std::vector<char> seen(static_cast<std::size_t>(nfa.num_states()), 0);
  std::vector<int> stack = states;
  for (int q : states) seen[q] = 1;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (auto [s, to] : nfa.out[q]) {
      if (s == Nfa::kEpsilon && !seen[to]) {
        seen[to] = 1;
        states.push_back(to);
        stack.push_back(to);
      }
    }
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

}  // namespace

Dfa determinize(const Nfa& nfa) {
  Dfa dfa;
  dfa.num_symbols = nfa.num_symbols;
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> subset) {
    auto [it, inserted] = index.emplace(subset, static_cast<int>(subsets.size()));
    if (inserted) subsets.push_back(std::move(subset));
    return it->second;
  };
  intern(eps_closure(nfa, nfa.initial));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const std::vector<int> cur = subsets[i];
    bool acc = std::any_of(cur.begin(), cur.end(), [&](int q) { return nfa.accepting[q] != 0; });
    dfa.accepting.push_back(acc ? 1 : 0);
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(nfa.num_symbols));
    for (int q : cur)
      for (auto [s, to] : nfa.out[q])
        if (s != Nfa::kEpsilon) succ[s].push_back(to);
    for (Symbol s = 0; s < nfa.num_symbols; ++s) dfa.delta.push_back(intern(eps_closure(nfa, std::move(succ[s]))));
  }
  return dfa;
}

Dfa canonicalize(const Dfa& dfa) {
  const int k = dfa.num_symbols;
  // Reachable part.
  std::vector<int> order;
  std::vector<int> reach(static_cast<std::size_t>(dfa.num_states()), -1);
  reach[0] = 0;
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol s = 0; s < k; ++s) {
      int t = dfa.next(order[i], s);
      if (reach[t] < 0) {
        reach[t] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  const int n = static_cast<int>(order.size());

  // Moore refinement.
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cls[i] = dfa.accepting[order[i]] ? 1 : 0;
  int num_classes = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig_index;
    std::vector<int> next_cls(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::vector<int> sig;
      sig.reserve(static_cast<std::size_t>(k) + 1);
      sig.push_back(cls[i]);
      for (Symbol s = 0; s < k; ++s) sig.push_back(cls[reach[dfa.next(order[i], s)]]);
      auto [it, _] = sig_index.emplace(std::move(sig), static_cast<int>(sig_index.size()));
      next_cls[i] = it->second;
    }
    int count = static_cast<int>(sig_index.size());
    cls = std::move(next_cls);
    if (count == num_classes) break;
    num_classes = count;
  }

  // Breadth-first renumbering from the initial class.
  std::vector<int> rep(static_cast<std::size_t>(num_classes), -1);
  for (int i = 0; i < n; ++i)
    if (rep[cls[i]] < 0) rep[cls[i]] = i;
  std::vector<int> canon(static_cast<std::size_t>(num_classes), -1);
  std::vector<int> queue{cls[0]};
  canon[cls[0]] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Symbol s = 0; s < k; ++s) {
      int c = cls[reach[dfa.next(order[rep[queue[i]]], s)]];
      if (canon[c] < 0) {
        canon[c] = static_cast<int>(queue.size());
        queue.push_back(c);
      }
    }
  Dfa out;
  out.num_symbols = k;
  out.accepting.resize(queue.size());
  out.delta.resize(queue.size() * static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < queue.size(); ++i) {
    int src = order[rep[queue[i]]];
    out.accepting[i] = dfa.accepting[src];
    for (Symbol s = 0; s < k; ++s) out.delta[i * k + s] = canon[cls[reach[dfa.next(src, s)]]];
  }
  return out;
}

Dfa product(const Dfa& a, const Dfa& b, ProductOp op) {
  const int k = a.num_symbols;
  Dfa out;
  out.num_symbols = k;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](std::pair<int, int> p) {
    auto [it, inserted] = index.emplace(p, static_cast<int>(pairs.size()));
    if (inserted) pairs.push_back(p);
    return it->second;
  };
  intern({0, 0});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [p, q] = pairs[i];
    bool x = a.accepting[p] != 0, y = b.accepting[q] != 0;
    bool acc = op == ProductOp::Union ? (x || y) : op == ProductOp::Intersection ? (x && y) : (x && !y);
    out.accepting.push_back(acc ? 1 : 0);
    for (Symbol s = 0; s < k; ++s) out.delta.push_back(intern({a.next(p, s), b.next(q, s)}));
  }
  return out;
}

Dfa complement_dfa(const Dfa& dfa) {
  Dfa out = dfa;
  for (auto& a : out.accepting) a = a ? 0 : 1;
  return out;
}

std::uint64_t digest(const Dfa& dfa) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(dfa.num_symbols));
  for (char a : dfa.accepting) mix(static_cast<std::uint64_t>(a));
  for (int d : dfa.delta) mix(static_cast<std::uint64_t>(d));
  return h;
}

}  // namespace cslcg
