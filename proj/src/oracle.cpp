#include "cslcg/oracle.hpp"

#include <algorithm>
#include <set>

namespace cslcg {

namespace {

bool holds(const RegularSet& set, const Alphabet& al, const State& s) {
  std::vector<Symbol> w{al.location(s.location)};
  for (int m : s.channel) w.push_back(al.message(m));
  return set.accepts(w);
}

}  // namespace

std::vector<std::vector<int>> subwords(const std::vector<int>& channel) {
  std::set<std::vector<int>> out;
  const std::size_t n = channel.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<int> w;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1) w.push_back(channel[k]);
    out.insert(w);
  }
  return {out.begin(), out.end()};
}

std::vector<int> oracle_available(const MonitoredArena& arena, int player, const State& lifted, const OracleOverlay& overlay) {
  const Alphabet& al = *arena.alphabet();
  const State base{arena.base_location(lifted.location), lifted.channel};
  const bool frozen = overlay.frozen && holds(*overlay.frozen, al, lifted);
  auto allowed = allowed_actions(arena.base(), base, player);
  std::vector<int> out;
  for (int a = 0; a < arena.num_actions(player); ++a) {
    bool ok = frozen || std::find(allowed.begin(), allowed.end(), a) != allowed.end();
    const auto& r = overlay.restriction[player];
    if (ok && r) ok = holds((*r)[static_cast<std::size_t>(a)], al, lifted);
    if (ok) out.push_back(a);
  }
  return out;
}

std::vector<State> oracle_successors(const MonitoredArena& arena, const State& lifted, int joint) {
  const int l = arena.base_location(lifted.location), m = arena.monitor_state(lifted.location);
  std::vector<State> out;
  for (const auto& o : arena.base().row(l, joint)) {
    if (o.probability <= Rational(0)) continue;
    auto next = o.op.apply(lifted.channel);
    if (!next) return {};
    for (const auto& w : subwords(*next)) {
      int mask = arena.mask_of(State{o.location, w});
      out.push_back(State{arena.lift_location(o.location, arena.monitor().step(m, mask)), w});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool oracle_pre(const MonitoredArena& arena, int player, const RegularSet& b, const State& lifted, const OracleOverlay& overlay) {
  const Alphabet& al = *arena.alphabet();
  const int other = 1 - player;
  auto mine = oracle_available(arena, player, lifted, overlay);
  auto theirs = oracle_available(arena, other, lifted, overlay);
  if (mine.empty() || theirs.empty()) return false;
  if (overlay.frozen && holds(*overlay.frozen, al, lifted)) return holds(b, al, lifted);
  for (int beta : theirs) {
    bool answered = false;
    for (int alpha : mine) {
      for (const auto& s : oracle_successors(arena, lifted, arena.joint(player, alpha, beta)))
        if (holds(b, al, s)) {
          answered = true;
          break;
        }
      if (answered) break;
    }
    if (!answered) return false;
  }
  return true;
}

bool oracle_pre(const Arena& two_player, int player, const RegularSet& b, const State& s) {
  MonitoredArena plain(std::make_shared<const Arena>(two_player), Monitor::none());
  return oracle_pre(plain, player, b, s);
}

}  // namespace cslcg
