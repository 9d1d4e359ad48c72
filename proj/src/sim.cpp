#include "cslcg/sim.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <unordered_map>

#include "cslcg/error.hpp"

namespace cslcg {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Symbol> symbols_of(const Alphabet& al, const State& s) {
  std::vector<Symbol> w{al.location(s.location)};
  for (int m : s.channel) w.push_back(al.message(m));
  return w;
}

bool in(const RegularSet& set, const State& s) { return set.accepts(symbols_of(*set.alphabet(), s)); }

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 64>(rng); }

int sample_index(const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double u = uniform01(rng) * total, acc = 0;
  int last = -1;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0) continue;
    acc += weights[k];
    last = static_cast<int>(k);
    if (u < acc) return last;
  }
  if (last < 0) throw Error("cannot sample from an empty distribution");
  return last;
}

std::uint64_t episode_digest(const Episode& e) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) { h = (h ^ v) * 0x100000001b3ULL; };
  for (const auto& s : e.states) {
    mix(static_cast<std::uint64_t>(s.location) + 1);
    for (int m : s.channel) mix(static_cast<std::uint64_t>(m) + 17);
    mix(0xff);
  }
  return h;
}

std::string render(const Arena& a, const State& s) { return a.alphabet->render(symbols_of(*a.alphabet, s)); }

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(s.location));
    for (int m : s.channel) h = splitmix64(h ^ static_cast<std::uint64_t>(m));
    return static_cast<std::size_t>(h);
  }
};

// Positional parts of a profile memoised per state. Gives the same numbers
// as probabilities() on the full history.
class Decider {
 public:
  explicit Decider(const StrategyProfile& p) : profile_(p), memo_(p.strategies.size() * 2) {}

  std::vector<double> operator()(std::size_t player, const std::vector<State>& history) {
    const Strategy& s = profile_.strategies[player];
    if (auto* pfm = std::get_if<PFMStrategy>(&s)) return positional(2 * player, *pfm, history.back());
    const auto& c = std::get<CountingStrategy>(s);
    const double p = counting_weight(static_cast<int>(history.size()) - 1);
    const auto& u = positional(2 * player, c.urgent, history.back());
    const auto& v = positional(2 * player + 1, c.fallback, history.back());
    std::vector<double> out(u.size());
    for (std::size_t a = 0; a < u.size(); ++a) out[a] = p * u[a] + (1 - p) * v[a];
    return out;
  }

 private:
  const std::vector<double>& positional(std::size_t slot, const PFMStrategy& s, const State& st) {
    auto& memo = memo_[slot];
    if (auto it = memo.find(st); it != memo.end()) return it->second;
    if (memo.size() > 1000000) memo.clear();
    std::vector<double> out;
    for (const auto& w : s.query(st)) out.push_back(boost::rational_cast<double>(w));
    return memo.emplace(st, std::move(out)).first->second;
  }

  const StrategyProfile& profile_;
  std::vector<std::unordered_map<State, std::vector<double>, StateHash>> memo_;
};

Episode run_episode(const StrategyProfile& profile, const SimConfig& cfg, std::mt19937_64& rng, Decider& decide);

}  // namespace

// ---------------------------------------------------------------------------
// Profiles and simulation

StrategyProfile StrategyProfile::uniform(const ArenaPtr& arena) {
  StrategyProfile p{arena, {}};
  for (int i = 0; i < arena->num_agents(); ++i) p.strategies.emplace_back(uniform_strategy(arena, i));
  return p;
}

void StrategyProfile::set(Strategy s) {
  if (strategy_arena(s).get() != arena.get() && strategy_arena(s)->agents != arena->agents) throw MismatchError("strategy belongs to another arena");
  strategies.at(idx(strategy_player(s))) = std::move(s);
}

double ObjectiveStats::std_error() const {
  if (episodes == 0) return 0;
  const double p = frequency();
  return std::sqrt(p * (1 - p) / episodes);
}

std::mt19937_64 episode_rng(std::uint64_t seed, std::uint64_t episode) { return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(episode + 0x632be59bd9b4e019ULL))); }

std::vector<int> sample_loss(const LossModel& loss, const std::vector<int>& channel, std::mt19937_64& rng) {
  const double lambda = boost::rational_cast<double>(loss.lambda);
  std::vector<int> out;
  for (int m : channel)
    if (uniform01(rng) >= lambda) out.push_back(m);
  return out;
}

Episode simulate_episode(const StrategyProfile& profile, const SimConfig& cfg, std::mt19937_64& rng) {
  Decider decide(profile);
  return run_episode(profile, cfg, rng, decide);
}

namespace {

Episode run_episode(const StrategyProfile& profile, const SimConfig& cfg, std::mt19937_64& rng, Decider& decide) {
  const Arena& a = *profile.arena;
  if (static_cast<int>(profile.strategies.size()) != a.num_agents()) throw ModelError("profile needs one strategy per agent");
  if (cfg.horizon < 0) throw Error("horizon must be non-negative");
  Episode e;
  e.states.push_back(State{a.initial_location, {}});
  std::vector<int> actions(idx(a.num_agents()));
  for (int t = 0; t < cfg.horizon; ++t) {
    const State& s = e.states.back();
    for (int i = 0; i < a.num_agents(); ++i) {
      auto probs = decide(idx(i), e.states);
      actions[idx(i)] = sample_index(probs, rng);
    }
    SimStep step;
    step.joint = a.encode(actions);
    const Distribution& row = a.row(s.location, step.joint);
    if (row.empty()) throw Error("step " + std::to_string(t) + ": no transition for " + a.joint_name(step.joint) + " at " + render(a, s));
    std::vector<double> w;
    for (const auto& o : row) w.push_back(boost::rational_cast<double>(o.probability));
    const Outcome& o = row[idx(sample_index(w, rng))];
    auto next = o.op.apply(s.channel);
    if (!next) throw Error("step " + std::to_string(t) + ": " + a.joint_name(step.joint) + " at " + render(a, s) + " applies an undefined channel operation");
    step.location = o.location;
    step.op = o.op;
    step.pushed = *next;
    step.next = State{o.location, sample_loss(cfg.loss, *next, rng)};
    if (!subword(step.next.channel, step.pushed)) throw Error("loss produced a non-subword");
    e.steps.push_back(step);
    e.states.push_back(step.next);
  }
  return e;
}

}  // namespace

bool trace_satisfies(const Episode& e, const Objective& o) {
  const std::size_t n = e.states.size();
  switch (o.path) {
    case PathKind::Eventually:
      for (const auto& s : e.states)
        if (in(o.target, s)) return true;
      return false;
    case PathKind::Always:
      for (const auto& s : e.states)
        if (!in(o.target, s)) return false;
      return true;
    case PathKind::Repeatedly: {
      const std::size_t horizon = n - 1, from = horizon - horizon / 4;
      for (std::size_t k = from; k < n; ++k)
        if (in(o.target, e.states[k])) return true;
      return false;
    }
  }
  return false;
}

SimResult simulate(const StrategyProfile& profile, const SimConfig& cfg, const std::vector<Objective>& watch) {
  if (cfg.episodes < 1) throw Error("episodes must be positive");
  struct Chunk {
    std::vector<Episode> traces;
    std::vector<int> satisfied;
    std::uint64_t digest = 0;
  };
  auto run = [&](int lo, int hi) {
    Chunk c;
    c.satisfied.assign(watch.size(), 0);
    Decider decide(profile);
    for (int ep = lo; ep < hi; ++ep) {
      auto rng = episode_rng(cfg.seed, static_cast<std::uint64_t>(ep));
      Episode e = run_episode(profile, cfg, rng, decide);
      for (std::size_t k = 0; k < watch.size(); ++k) c.satisfied[k] += trace_satisfies(e, watch[k]);
      c.digest ^= splitmix64(episode_digest(e) + static_cast<std::uint64_t>(ep));
      if (cfg.keep_traces) c.traces.push_back(std::move(e));
    }
    return c;
  };
  std::vector<Chunk> chunks;
  const int jobs = std::max(1, std::min(cfg.jobs, cfg.episodes));
  if (jobs == 1) {
    chunks.push_back(run(0, cfg.episodes));
  } else {
    std::vector<std::future<Chunk>> fs;
    for (int j = 0; j < jobs; ++j) {
      const int lo = static_cast<int>(static_cast<long>(cfg.episodes) * j / jobs), hi = static_cast<int>(static_cast<long>(cfg.episodes) * (j + 1) / jobs);
      fs.push_back(std::async(std::launch::async, run, lo, hi));
    }
    for (auto& f : fs) chunks.push_back(f.get());
  }
  SimResult r;
  for (const auto& o : watch) r.stats.push_back({to_string(o), 0, cfg.episodes});
  for (auto& c : chunks) {
    for (std::size_t k = 0; k < watch.size(); ++k) r.stats[k].satisfied += c.satisfied[k];
    r.digest ^= c.digest;
    for (auto& e : c.traces) r.traces.push_back(std::move(e));
  }
  return r;
}

std::string format_episode(const Arena& a, const Episode& e) {
  std::ostringstream os;
  os << "0 " << render(a, e.states[0]) << "\n";
  for (std::size_t t = 0; t < e.steps.size(); ++t) {
    const auto& s = e.steps[t];
    os << t + 1 << " " << render(a, s.next) << "  <- " << a.joint_name(s.joint) << " -> " << a.alphabet->locations()[idx(s.location)];
    if (s.op.tag == ChannelOp::Tag::Push) os << " push " << a.alphabet->messages()[idx(s.op.message)];
    if (s.op.tag == ChannelOp::Tag::Pop) os << " pop " << a.alphabet->messages()[idx(s.op.message)];
    if (s.op.tag == ChannelOp::Tag::Nop) os << " nop";
    State before{s.location, s.pushed};
    if (before.channel != s.next.channel) os << ", lost from " << render(a, before);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Random opponents

PFMStrategy random_pfm(const ArenaPtr& arena, int player, std::mt19937_64& rng) {
  const AlphabetPtr& al = arena->alphabet;
  const int n = arena->num_actions(player);
  std::vector<RegularSet> allowed;
  for (int a = 0; a < n; ++a) allowed.push_back(allowed_region(*arena, player, a));
  PFMStrategy s(arena, player);
  for (int g = 0; g < 4; ++g) {
    Dfa d;
    d.num_symbols = al->size();
    const int q = 3;
    for (int k = 0; k < q * d.num_symbols; ++k) d.delta.push_back(static_cast<int>(rng() % q));
    for (int k = 0; k < q; ++k) d.accepting.push_back(static_cast<char>(rng() % 2));
    RegularSet guard = intersect(RegularSet(al, SetKind::States, d), RegularSet::universe(al, SetKind::States));
    // split by which actions are allowed so every support stays legal
    std::vector<std::pair<RegularSet, std::vector<int>>> parts{{guard, {}}};
    for (int a = 0; a < n; ++a) {
      std::vector<std::pair<RegularSet, std::vector<int>>> next;
      for (auto& [set, acts] : parts) {
        RegularSet yes = intersect(set, allowed[idx(a)]), no = subtract(set, allowed[idx(a)]);
        if (!yes.is_empty()) {
          auto more = acts;
          more.push_back(a);
          next.emplace_back(yes, more);
        }
        if (!no.is_empty()) next.emplace_back(no, acts);
      }
      parts = std::move(next);
    }
    for (auto& [set, acts] : parts) {
      if (acts.empty()) continue;
      // uniform on the simplex: normalised exponentials, kept rational at 1/1000 resolution
      ActionWeights w(idx(n), Rational(0));
      std::int64_t total = 0;
      std::vector<std::int64_t> raw;
      for (std::size_t k = 0; k < acts.size(); ++k) raw.push_back(std::max<std::int64_t>(1, std::llround(-1000.0 * std::log1p(-uniform01(rng)))));
      for (auto r : raw) total += r;
      for (std::size_t k = 0; k < acts.size(); ++k) w[idx(acts[k])] = Rational(raw[k], total);
      s.add_cell(set, w, "random " + std::to_string(g));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Small-controller oracle

namespace {

struct ExplicitGame {
  std::vector<State> states;
  std::map<State, int> index;
  std::vector<std::vector<int>> actions;               // allowed controller actions per state
  std::vector<std::vector<std::vector<int>>> succ;     // [state][action index] -> successor states
};

ExplicitGame explore(const ArenaPtr& arena, int channel_bound) {
  MonitoredArena ma(arena, Monitor::none());
  ExplicitGame g;
  auto add = [&](const State& s) {
    auto [it, fresh] = g.index.emplace(s, static_cast<int>(g.states.size()));
    if (fresh) {
      if (static_cast<int>(s.channel.size()) > channel_bound)
        throw Error("small-controller oracle: channel bound " + std::to_string(channel_bound) + " exceeded at " + render(*arena, s));
      g.states.push_back(s);
    }
    return it->second;
  };
  add(State{arena->initial_location, {}});
  for (std::size_t k = 0; k < g.states.size(); ++k) {
    const State s = g.states[k];
    auto acts = allowed_actions(*arena, s, 0);
    auto opp = allowed_actions(*arena, s, 1);
    if (acts.empty() || opp.empty()) throw Error("small-controller oracle: no allowed action at " + render(*arena, s));
    std::vector<std::vector<int>> per;
    for (int a : acts) {
      std::vector<int> out;
      for (const auto& t : oracle_successors(ma, s, ma.joint(0, a, opp[0]))) out.push_back(add(t));
      if (out.empty()) throw Error("small-controller oracle: undefined row at " + render(*arena, s));
      per.push_back(std::move(out));
    }
    g.actions.push_back(std::move(acts));
    g.succ.push_back(std::move(per));
  }
  return g;
}

// Qualitative checks on the finite chain given by `next` (reachable from node 0).
class ChainCheck {
 public:
  ChainCheck(std::vector<std::vector<int>> next, std::vector<int> base) : next_(std::move(next)), base_(std::move(base)) {}

  bool holds(const Objective& o, const std::vector<char>& target) const {
    auto t = [&](int v) { return target[idx(base_[idx(v)])] != 0; };
    switch (o.path) {
      case PathKind::Eventually: {
        if (o.quantifier == Quantifier::NZ) return any_reachable(0, [](int) { return true; }, t);
        if (t(0)) return true;
        // every state reached while avoiding the target can still reach it
        auto zone = reach(0, [&](int v) { return !t(v); });
        for (int v : zone)
          if (!t(v) && !any_reachable(v, [](int) { return true; }, t)) return false;
        return true;
      }
      case PathKind::Always: {
        auto all = reach(0, [](int) { return true; });
        if (o.quantifier == Quantifier::AS) {
          for (int v : all)
            if (!t(v)) return false;
          return true;
        }
        if (!t(0)) return false;
        // greatest subset of the target closed under successors
        std::vector<char> keep(next_.size(), 0);
        for (int v : all) keep[idx(v)] = t(v);
        for (bool changed = true; changed;) {
          changed = false;
          for (int v : all) {
            if (!keep[idx(v)]) continue;
            for (int w : next_[idx(v)])
              if (!keep[idx(w)]) {
                keep[idx(v)] = 0;
                changed = true;
                break;
              }
          }
        }
        for (int v : reach(0, t))
          if (keep[idx(v)]) return true;
        return false;
      }
      case PathKind::Repeatedly: {
        bool any = false, every = true;
        for (const auto& bscc : bottom_sccs()) {
          bool hit = false;
          for (int v : bscc) hit = hit || t(v);
          any = any || hit;
          every = every && hit;
        }
        return o.quantifier == Quantifier::AS ? every : any;
      }
    }
    return false;
  }

 private:
  // nodes reachable from `from` through nodes satisfying `through` (from included)
  std::vector<int> reach(int from, const std::function<bool(int)>& through) const {
    std::vector<char> seen(next_.size(), 0);
    std::vector<int> out{from};
    seen[idx(from)] = 1;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!through(out[k])) continue;
      for (int w : next_[idx(out[k])])
        if (!seen[idx(w)]) {
          seen[idx(w)] = 1;
          out.push_back(w);
        }
    }
    return out;
  }
  bool any_reachable(int from, const std::function<bool(int)>& through, const std::function<bool(int)>& goal) const {
    for (int v : reach(from, through))
      if (goal(v)) return true;
    return false;
  }
  std::vector<std::vector<int>> bottom_sccs() const {
    auto all = reach(0, [](int) { return true; });
    std::vector<std::vector<int>> out;
    std::vector<char> done(next_.size(), 0);
    for (int v : all) {
      if (done[idx(v)]) continue;
      auto fwd = reach(v, [](int) { return true; });
      // v is in a bottom SCC iff everything it reaches reaches it back
      bool bottom = true;
      for (int w : fwd) {
        auto back = reach(w, [](int) { return true; });
        if (std::find(back.begin(), back.end(), v) == back.end()) {
          bottom = false;
          break;
        }
      }
      if (bottom) {
        for (int w : fwd) done[idx(w)] = 1;
        out.push_back(fwd);
      }
    }
    return out;
  }

  std::vector<std::vector<int>> next_;
  std::vector<int> base_;
};

}  // namespace

SmallControllerResult oracle_small_controller(const ArenaPtr& arena, const Conjunction& phi, int memory_bound, int channel_bound) {
  if (arena->num_agents() != 2 || arena->num_actions(1) != 1) throw FragmentError("small-controller oracle needs a 1.5-player arena (opponent with a single action)");
  if (memory_bound < 1) throw Error("memory bound must be at least 1");
  ExplicitGame g = explore(arena, channel_bound);
  const int n = static_cast<int>(g.states.size()), mem = memory_bound;
  std::vector<std::vector<char>> targets;
  for (const auto& o : phi.atoms) {
    std::vector<char> t;
    for (const auto& s : g.states) t.push_back(in(o.target, s));
    targets.push_back(std::move(t));
  }
  SmallControllerResult result;
  result.reachable_states = n;
  std::vector<int> act(idx(n * mem), -1);  // index into g.actions[s]
  std::vector<int> upd(idx(mem * n), mem == 1 ? 0 : -1);

  // Decisions are made lazily, only for product nodes the controller reaches.
  std::function<bool()> search = [&]() -> bool {
    std::map<int, int> node_of;  // s * mem + m -> chain node
    std::vector<int> order;
    auto visit = [&](int key) {
      if (node_of.emplace(key, static_cast<int>(order.size())).second) order.push_back(key);
    };
    visit(0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int s = order[k] / mem, m = order[k] % mem;
      int& a = act[idx(order[k])];
      if (a < 0) {
        for (int c = 0; c < static_cast<int>(g.actions[idx(s)].size()); ++c) {
          a = c;
          if (search()) return true;
        }
        a = -1;
        return false;
      }
      for (int t : g.succ[idx(s)][idx(a)]) {
        int& u = upd[idx(m * n + t)];
        if (u < 0) {
          for (int c = 0; c < mem; ++c) {
            u = c;
            if (search()) return true;
          }
          u = -1;
          return false;
        }
        visit(t * mem + u);
      }
    }
    ++result.controllers;
    std::vector<std::vector<int>> next(order.size());
    std::vector<int> base;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int s = order[k] / mem, m = order[k] % mem;
      base.push_back(s);
      for (int t : g.succ[idx(s)][idx(act[idx(order[k])])]) next[k].push_back(node_of.at(t * mem + upd[idx(m * n + t)]));
    }
    ChainCheck chain(std::move(next), std::move(base));
    for (std::size_t k = 0; k < phi.atoms.size(); ++k)
      if (!chain.holds(phi.atoms[k], targets[k])) return false;
    return true;
  };
  result.exists = search();
  return result;
}

}  // namespace cslcg
