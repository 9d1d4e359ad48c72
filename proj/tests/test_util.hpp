#pragma once

#include <random>
#include <string>
#include <vector>

#include "cslcg/arena.hpp"
#include "cslcg/model.hpp"

namespace cslcg::testing {

inline ModelFile load_model(const std::string& name) { return parse_model(std::string(CSLCG_MODELS_DIR) + "/" + name); }

inline std::vector<std::vector<int>> all_channels(int messages, int max_len) {
  std::vector<std::vector<int>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    for (int m = 0; m < messages; ++m) {
      auto w = out[i];
      w.push_back(m);
      out.push_back(w);
    }
  }
  return out;
}

inline std::vector<State> all_states(const Alphabet& al, int max_len) {
  std::vector<State> out;
  for (int l = 0; l < al.num_locations(); ++l)
    for (const auto& c : all_channels(al.num_messages(), max_len)) out.push_back(State{l, c});
  return out;
}

inline std::vector<Symbol> state_symbols(const Alphabet& al, const State& s) {
  std::vector<Symbol> w{al.location(s.location)};
  for (int m : s.channel) w.push_back(al.message(m));
  return w;
}

/// Random valid two-player arena over locations l0.., messages a.., with
/// pops rarer than pushes. Retries until validate() accepts it.
inline Arena random_arena(std::mt19937_64& rng, int locs = 2, int msgs = 2, int acts0 = 2, int acts1 = 2) {
  std::vector<std::string> ls, ms;
  for (int l = 0; l < locs; ++l) ls.push_back("l" + std::to_string(l));
  for (int m = 0; m < msgs; ++m) ms.push_back(std::string(1, static_cast<char>('a' + m)));
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  for (;;) {
    Arena a;
    a.agents = {"p", "q"};
    a.alphabet = std::make_shared<Alphabet>(ls, ms);
    a.actions = {{}, {}};
    for (int k = 0; k < acts0; ++k) a.actions[0].push_back("x" + std::to_string(k));
    for (int k = 0; k < acts1; ++k) a.actions[1].push_back("y" + std::to_string(k));
    a.reset_table();
    for (auto& per : a.table)
      for (auto& row : per) {
        int n = 1 + pick(2);
        for (int k = 0; k < n; ++k) {
          ChannelOp op;
          int r = pick(6);
          if (r < 2) op = ChannelOp::nop();
          else if (r < 4) op = ChannelOp::push(pick(msgs));
          else if (r == 4 && n == 1) op = ChannelOp::pop(pick(msgs));
          row.push_back(Outcome{Rational(1, n), pick(locs), op});
        }
      }
    if (validate(a).ok()) return a;
  }
}

inline bool holds(const RegularSet& set, const State& s) { return set.accepts(state_symbols(*set.alphabet(), s)); }

}  // namespace cslcg::testing
