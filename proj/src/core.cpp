#include "cslcg/core.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "cslcg/error.hpp"

namespace cslcg {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<int> members(unsigned mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

unsigned mask_of(const std::vector<int>& agents) {
  unsigned m = 0;
  for (int i : agents) m |= 1u << i;
  return m;
}

// Drops repeated atoms and repeated disjuncts (Γ often repeats a goal).
Formula tidy(const Formula& f) {
  Formula out;
  std::set<std::string> seen_disjuncts;
  for (const auto& c : f.disjuncts) {
    Conjunction d;
    std::set<std::string> seen;
    for (const auto& o : c.atoms)
      if (seen.insert(to_string(o)).second) d.atoms.push_back(o);
    if (seen_disjuncts.insert(to_string(d)).second) out.disjuncts.push_back(std::move(d));
  }
  return out;
}

QueryReport run_query(const ArenaPtr& arena, const Conjunction& c) {
  auto t0 = Clock::now();
  QueryReport q;
  q.formula = to_string(c);
  ConjunctionRegion r = solve_conjunction(arena, 0, c);
  q.inconsistent = r.inconsistent;
  q.initial_winning = initial_in(*arena, r.winning);
  q.seconds = since(t0);
  return q;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; results keep index order.
template <class T, class Fn>
std::vector<T> fan_out(std::size_t n, int jobs, Fn fn) {
  std::vector<T> out;
  out.reserve(n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t lo = 0; lo < n; lo += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<T>> batch;
    for (std::size_t i = lo; i < std::min(n, lo + static_cast<std::size_t>(jobs)); ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

Formula goal_conjunction(const GameSpec& game, const std::vector<int>& agents) {
  Formula f{{Conjunction{}}};
  for (int i : agents) f = conjoin(f, game.goals[static_cast<std::size_t>(i)]);
  return tidy(f);
}

void check_game(const GameSpec& game) {
  if (!game.arena) throw ModelError("game has no arena");
  if (static_cast<int>(game.goals.size()) != game.arena->num_agents()) throw ModelError("every agent needs exactly one goal");
  if (game.arena->num_agents() > 16) throw ModelError("too many agents for exhaustive coalition search");
}

// Step 3 results depend on C only, so they are shared between candidates W.
class CoalitionCache {
 public:
  explicit CoalitionCache(const GameSpec& game) : game_(game) {}
  const CoalitionReport& get(unsigned mask) {
    auto it = cache_.find(mask);
    if (it == cache_.end()) it = cache_.emplace(mask, coalition_check(game_, members(mask, game_.arena->num_agents()))).first;
    return it->second;
  }
  void put(unsigned mask, CoalitionReport r) { cache_.emplace(mask, std::move(r)); }
  bool has(unsigned mask) const { return cache_.count(mask) > 0; }

 private:
  const GameSpec& game_;
  std::map<unsigned, CoalitionReport> cache_;
};

Step3Report step3_cached(const GameSpec& game, const std::vector<int>& winners, CoalitionCache& cache, int jobs) {
  const int n = game.arena->num_agents();
  const unsigned all = (1u << n) - 1, rest = all & ~mask_of(winners);
  std::vector<unsigned> subsets;
  for (unsigned c = rest; c; c = (c - 1) & rest) subsets.push_back(c);
  std::sort(subsets.begin(), subsets.end(), [](unsigned a, unsigned b) {
    int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<unsigned> todo;
  for (unsigned c : subsets)
    if (!cache.has(c)) todo.push_back(c);
  auto fresh = fan_out<CoalitionReport>(todo.size(), jobs, [&](std::size_t i) { return coalition_check(game, members(todo[i], n)); });
  for (std::size_t i = 0; i < todo.size(); ++i) cache.put(todo[i], std::move(fresh[i]));

  Step3Report out;
  out.winners = winners;
  for (unsigned c : subsets) {
    out.coalitions.push_back(cache.get(c));
    if (out.coalitions.back().wins) out.no_deviation = false;
  }
  return out;
}

CoreVerdict e_core_impl(const GameSpec& game, const Formula& gamma, const CoreOptions& opt, CoalitionCache& cache) {
  auto t0 = Clock::now();
  check_game(game);
  CoreVerdict v;
  v.problem = "e-core";
  v.gamma = to_string(gamma);
  const int n = game.arena->num_agents();
  std::vector<unsigned> order;
  for (unsigned w = 0; w < (1u << n); ++w) order.push_back(w);
  std::stable_sort(order.begin(), order.end(), [](unsigned a, unsigned b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  for (unsigned w : order) {
    CandidateReport c;
    c.winners = members(w, n);
    c.step2 = step2_check(game, gamma, c.winners, opt);
    if (c.step2.passes) c.step3 = step3_cached(game, c.winners, cache, opt.jobs);
    bool ok = c.passes();
    v.candidates.push_back(std::move(c));
    if (ok) {
      v.answer = true;
      v.witness = v.candidates.back().winners;
      break;
    }
  }
  v.seconds = since(t0);
  return v;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void format_into(std::ostringstream& os, const GameSpec& game, const CoreVerdict& v, const std::string& indent) {
  os << indent << v.problem << " " << v.gamma << ": " << yes_no(v.answer);
  if (v.witness) os << " (W = " << game.agent_set(*v.witness) << ")";
  os << "  [" << v.seconds << " s]\n";
  for (const auto& p : v.parts) format_into(os, game, p, indent + "  ");
  for (const auto& c : v.candidates) {
    os << indent << "  W = " << game.agent_set(c.winners) << ": step 2 " << (c.step2.passes ? "passes" : "fails");
    if (c.step3) {
      if (auto d = c.step3->deviating())
        os << ", step 3 blocked by C = " << game.agent_set(*d);
      else
        os << ", step 3 no deviation";
    }
    os << "\n";
    for (const auto& q : c.step2.disjuncts)
      os << indent << "    " << (q.inconsistent ? "inconsistent" : yes_no(q.initial_winning)) << "  " << q.formula << "  [" << q.seconds << " s]\n";
    if (c.step3)
      for (const auto& k : c.step3->coalitions) os << indent << "    C = " << game.agent_set(k.coalition) << ": " << (k.wins ? "wins" : "cannot win") << "\n";
  }
}

}  // namespace

// ---------------------------------------------------------------------------

GameSpec GameSpec::from_model(const ModelFile& model, bool require_goals) {
  GameSpec g;
  g.arena = std::make_shared<const Arena>(model.arena);
  g.goals.assign(static_cast<std::size_t>(model.arena.num_agents()), Formula{});
  std::vector<bool> seen(g.goals.size(), false);
  for (const auto& [agent, text] : model.goals) {
    auto i = model.arena.agent_index(agent);
    if (!i) throw ModelError("goal for unknown agent '" + agent + "'");
    if (seen[static_cast<std::size_t>(*i)]) throw ModelError("second goal for agent '" + agent + "'");
    seen[static_cast<std::size_t>(*i)] = true;
    g.goals[static_cast<std::size_t>(*i)] = parse_objective(model.arena.alphabet, text);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (require_goals && !seen[i]) throw ModelError("agent '" + model.arena.agents[i] + "' has no goal");
  for (const auto& [name, text] : model.properties) g.properties.emplace_back(name, parse_objective(model.arena.alphabet, text));
  return g;
}

Formula GameSpec::property(const std::string& name_or_text) const {
  for (const auto& [name, f] : properties)
    if (name == name_or_text) return f;
  return parse_objective(arena->alphabet, name_or_text);
}

std::string GameSpec::agent_set(const std::vector<int>& agents) const {
  std::string s = "{";
  for (std::size_t k = 0; k < agents.size(); ++k) s += (k ? "," : "") + arena->agents[static_cast<std::size_t>(agents[k])];
  return s + "}";
}

std::optional<std::vector<int>> Step3Report::deviating() const {
  for (const auto& c : coalitions)
    if (c.wins) return c.coalition;
  return std::nullopt;
}

Step2Report step2_check(const GameSpec& game, const Formula& gamma, const std::vector<int>& winners, const CoreOptions& opt) {
  check_game(game);
  const int n = game.arena->num_agents();
  const unsigned w = mask_of(winners);
  Formula phi = gamma;
  for (int i = 0; i < n; ++i) {
    const Formula& g = game.goals[static_cast<std::size_t>(i)];
    phi = conjoin(phi, (w >> i & 1u) ? g : negate(g));
  }
  phi = tidy(phi);
  std::vector<int> everyone(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) everyone[static_cast<std::size_t>(i)] = i;
  auto grand = std::make_shared<const Arena>(coalition_arena(*game.arena, everyone));

  Step2Report out;
  out.winners = winners;
  std::vector<const Conjunction*> live;
  for (const auto& d : phi.disjuncts) {
    check_fragment(d, true);
    if (syntactically_inconsistent(d)) {
      out.disjuncts.push_back({to_string(d), true, false, 0});
    } else {
      live.push_back(&d);
    }
  }
  auto solved = fan_out<QueryReport>(live.size(), opt.jobs, [&](std::size_t i) { return run_query(grand, *live[i]); });
  for (auto& q : solved) {
    out.passes = out.passes || q.initial_winning;
    out.disjuncts.push_back(std::move(q));
  }
  return out;
}

CoalitionReport coalition_check(const GameSpec& game, const std::vector<int>& coalition) {
  check_game(game);
  auto arena = std::make_shared<const Arena>(coalition_arena(*game.arena, coalition));
  const bool one_half = is_one_and_half(*arena, 0);
  CoalitionReport out;
  out.coalition = coalition;
  // disjunctive goals: C deviates if it can force some disjunct outright
  for (const auto& d : goal_conjunction(game, coalition).disjuncts) {
    check_fragment(d, one_half);
    QueryReport q = syntactically_inconsistent(d) ? QueryReport{to_string(d), true, false, 0} : run_query(arena, d);
    out.wins = out.wins || q.initial_winning;
    out.disjuncts.push_back(std::move(q));
    if (out.wins) break;
  }
  return out;
}

Step3Report step3_check(const GameSpec& game, const std::vector<int>& winners, const CoreOptions& opt) {
  check_game(game);
  CoalitionCache cache(game);
  return step3_cached(game, winners, cache, opt.jobs);
}

CoreVerdict e_core(const GameSpec& game, const Formula& gamma, const CoreOptions& opt) {
  CoalitionCache cache(game);
  return e_core_impl(game, tidy(gamma), opt, cache);
}

CoreVerdict a_core(const GameSpec& game, const Formula& gamma, const CoreOptions& opt) {
  auto t0 = Clock::now();
  check_game(game);
  for (const auto& d : gamma.disjuncts)
    for (const auto& o : d.atoms)
      if (o.path == PathKind::Repeatedly) throw FragmentError("a-core: negating a repeated-reachability property needs positive co-Buchi objectives, which the solvers do not support");
  Formula neg = tidy(negate(gamma));
  CoreVerdict v;
  v.problem = "a-core";
  v.gamma = to_string(gamma);
  v.answer = true;
  CoalitionCache cache(game);
  for (const auto& d : neg.disjuncts) {
    v.parts.push_back(e_core_impl(game, formula_of(d), opt, cache));
    if (v.parts.back().answer) {
      v.answer = false;
      break;
    }
  }
  v.seconds = since(t0);
  return v;
}

std::string format_verdict(const GameSpec& game, const CoreVerdict& v) {
  std::ostringstream os;
  format_into(os, game, v, "");
  return os.str();
}

}  // namespace cslcg
